#pragma once
#include <cmath>
#include <numbers>
#include <vector>

#include "gdnls/field.hpp"
#include "gdnls/grid.hpp"

namespace gdnls {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Physical samples u(j/M), j = 0..M-1, M = g.npoints.
std::vector<cdouble> to_physical(const SpectralField& f, const Grid& g);

// Coefficients of modes |n| <= max_mode_out read back from samples. Exact for
// band-limited data as long as 2*max_mode_out + 1 <= samples.size().
SpectralField to_spectral(const std::vector<cdouble>& samples, int max_mode_out);

// d^order/dx^order, i.e. multiplier (2 pi i n)^order.
SpectralField derivative(const SpectralField& f, int order);

// Multiplier |n|^s (kills the mean mode); s >= 0.
SpectralField fractional_derivative(const SpectralField& f, double s);

// Coefficients of f*g on modes |n| <= max_mode_out, computed on g's physical
// grid. Exact when the product band 2*f.max_mode fits the grid's sample count.
SpectralField pointwise_product(const SpectralField& a, const SpectralField& b,
                                const Grid& g, int max_mode_out);

SpectralField apply_cutoff(const SpectralField& f, const Cutoff& cut);

double l2_norm_sq(const SpectralField& f);                 // sum |c_n|^2
double sobolev_norm_sq(const SpectralField& f, double s);  // sum (1+n^2)^s |c_n|^2
inline double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }
inline double sobolev_norm(const SpectralField& f, double s) {
  return std::sqrt(sobolev_norm_sq(f, s));
}

// Integral over the unit torus = mean of the samples.
cdouble integrate(const std::vector<cdouble>& samples);

double distance_l2(const SpectralField& a, const SpectralField& b);
double distance_sobolev(const SpectralField& a, const SpectralField& b, double s);

}  // namespace gdnls
