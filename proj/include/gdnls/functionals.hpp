#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

#include "gdnls/field.hpp"
#include "gdnls/grid.hpp"

namespace gdnls {

// Samples of v = (cutoff applied to u) and its first two derivatives on the
// product grid; shared input of every functional below. asq = |v|^2.
struct PointwiseData {
  std::vector<cdouble> v, dv, d2v;
  std::vector<double> asq;
};
PointwiseData pointwise_data(const SpectralField& u, const Grid& g, const Cutoff& cut);

struct ModifiedEnergyParams {
  double alpha = 2.0;
  double beta = 2.0 / 3.0;
};
inline double canonical_beta(double sigma) { return 2.0 / (sigma + 1.0); }
inline ModifiedEnergyParams canonical_params(double sigma) {
  return {2.0, canonical_beta(sigma)};
}

// Conserved energy of the full flow: 1/2 ||u'||^2 + Im ∫ |u|^{2σ} u' conj(u) / (2σ+2).
double energy(const SpectralField& u, double sigma, const Grid& g);
// Same with the correction evaluated on v = J u; conserved by the truncated flow.
double cutoff_energy(const SpectralField& u, double sigma, const Grid& g,
                     const Cutoff& cut);

// Pieces of the modified energy. t0 is ||u''||^2 (no cutoff); the others see v.
double t0_h2(const SpectralField& u);
double t1_term(const PointwiseData& p, double sigma);               // Im ∫ conj(v'') v' |v|^{2σ}
double t2_term(const PointwiseData& p, double sigma);               // σ Im ∫ v'' v' conj(v)^2 |v|^{2(σ-1)}
double t3_term(const PointwiseData& p, double sigma, double delta); // σ(σ-1) Im ∫ (v')^3 conj(v)^3 (|v|^2+δ)^{σ-2}

// modified = t0 - alpha t1 - beta t2 - (beta/2) t3
double modified_energy(const SpectralField& u, double sigma, const Grid& g,
                       const Cutoff& cut, const ModifiedEnergyParams& mp,
                       double delta);

// Independent single-pass evaluator of the canonical (alpha = 2) modified
// energy, written as literal coefficients on the bare correction integrals:
//   t0 - 2 I_a - (2σ/(σ+1)) I_b - (σ(σ-1)/(σ+1)) I_c
// with I_a = Im ∫ conj(v'') v' |v|^{2σ}, I_b = Im ∫ v'' v' conj(v)^2 |v|^{2(σ-1)},
// I_c = Im ∫ (v')^3 conj(v)^3 (|v|^2+δ)^{σ-2}. Cross-checks modified_energy.
double modified_energy_canonical_literal(const SpectralField& u, double sigma,
                                         const Grid& g, const Cutoff& cut,
                                         double delta);

// Cubic-in-derivative functionals that the modified energy is built to cancel.
double b1_term(const PointwiseData& p, double sigma);               // σ ∫ |v''|^2 |v|^{2(σ-1)} 2Re(conj(v) v')
double b2_term(const PointwiseData& p, double sigma);               // σ Re ∫ (v'')^2 conj(v') conj(v) |v|^{2(σ-1)}
double b3_term(const PointwiseData& p, double sigma, double delta); // σ(σ-1) Re ∫ (v'')^2 v' conj(v)^3 (|v|^2+δ)^{σ-2}

// Bounded-remainder basis, k = 0, 1, 2:
//   Re ∫ conj(v'') (v')^{3-k} conj(v')^k v^k conj(v)^{2-k} (|v|^2+δ)^{σ-2}
double good_term(const PointwiseData& p, double sigma, double delta, int k);

// Small-data machinery. The embedding constant c is estimated empirically as
//   max |Im ∫ |u|^{2σ} u' conj(u)| / ||u||_{H1}^{2σ+2}
// over random H1-normalized fields; m is where y^2/2 - c y^{2σ+2}/(2σ+2) peaks.
double estimate_embedding_constant(double sigma, int n_max, int samples,
                                   std::uint64_t seed);
// h(s) = s^2/2 - c s^{2σ+2}/(2σ+2), the trap height at H1 size s.
inline double small_data_h(double s_val, double sigma, double c) {
  return 0.5 * s_val * s_val -
         c * std::pow(s_val, 2.0 * sigma + 2.0) / (2.0 * sigma + 2.0);
}
// Maximizer (1/c)^{1/(2σ)} of h; data trapped below it stay below it.
inline double threshold_m(double sigma, double c) {
  return std::pow(c, -1.0 / (2.0 * sigma));
}
double energy_barrier(double c, double sigma);  // value of the peak at m
// Largest delta <= m with delta^2/2 + c delta^{2σ+2}/(2σ+2) < barrier.
double trap_radius(double c, double sigma);

}  // namespace gdnls
