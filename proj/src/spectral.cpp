#include "gdnls/spectral.hpp"

#include <algorithm>
#include <stdexcept>

#include "gdnls/fft.hpp"

namespace gdnls {

std::vector<cdouble> to_physical(const SpectralField& f, const Grid& g) {
  const int m = g.npoints;
  if (f.size() > m)
    throw std::invalid_argument("to_physical: grid too small for field band");
  std::vector<cdouble> bins(m, cdouble(0.0));
  for (int n = -f.max_mode; n <= f.max_mode; ++n)
    bins[(n % m + m) % m] = f.mode(n);
  std::vector<cdouble> out;
  dft(bins, out, /*forward=*/false);
  return out;
}

SpectralField to_spectral(const std::vector<cdouble>& samples, int max_mode_out) {
  const int m = static_cast<int>(samples.size());
  if (2 * max_mode_out + 1 > m)
    throw std::invalid_argument("to_spectral: requested band exceeds sample count");
  std::vector<cdouble> hat;
  dft(samples, hat, /*forward=*/true);
  SpectralField f(max_mode_out);
  const double inv_m = 1.0 / m;
  for (int n = -max_mode_out; n <= max_mode_out; ++n)
    f.mode(n) = hat[(n % m + m) % m] * inv_m;
  return f;
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0) throw std::invalid_argument("derivative: order must be >= 0");
  SpectralField g = f;
  for (int n = -f.max_mode; n <= f.max_mode; ++n) {
    cdouble mult(1.0);
    for (int k = 0; k < order; ++k) mult *= cdouble(0.0, two_pi * n);
    g.mode(n) = mult * f.mode(n);
  }
  return g;
}

SpectralField fractional_derivative(const SpectralField& f, double s) {
  if (s < 0.0)
    throw std::invalid_argument("fractional_derivative: s must be >= 0");
  SpectralField g = f;
  for (int n = -f.max_mode; n <= f.max_mode; ++n)
    g.mode(n) = std::pow(std::abs(static_cast<double>(n)), s) * f.mode(n);
  if (s == 0.0) g.mode(0) = cdouble(0.0);  // 0^0 = 1 would keep the mean
  return g;
}

SpectralField pointwise_product(const SpectralField& a, const SpectralField& b,
                                const Grid& g, int max_mode_out) {
  auto sa = to_physical(a, g);
  auto sb = to_physical(b, g);
  for (std::size_t j = 0; j < sa.size(); ++j) sa[j] *= sb[j];
  return to_spectral(sa, max_mode_out);
}

SpectralField apply_cutoff(const SpectralField& f, const Cutoff& cut) {
  SpectralField g = f;
  if (cut.cutoff_mode < 0) return g;
  for (int n = -f.max_mode; n <= f.max_mode; ++n)
    if (std::abs(n) > cut.cutoff_mode) g.mode(n) = cdouble(0.0);
  return g;
}

double l2_norm_sq(const SpectralField& f) {
  double acc = 0.0;
  for (const cdouble& c : f.coeff) acc += std::norm(c);
  return acc;
}

double sobolev_norm_sq(const SpectralField& f, double s) {
  double acc = 0.0;
  for (int n = -f.max_mode; n <= f.max_mode; ++n)
    acc += std::pow(1.0 + static_cast<double>(n) * n, s) * std::norm(f.mode(n));
  return acc;
}

cdouble integrate(const std::vector<cdouble>& samples) {
  cdouble acc(0.0);
  for (const cdouble& v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

namespace {
template <class Weight>
double weighted_dist_sq(const SpectralField& a, const SpectralField& b, Weight w) {
  const int nmax = std::max(a.max_mode, b.max_mode);
  double acc = 0.0;
  for (int n = -nmax; n <= nmax; ++n) {
    cdouble ca = std::abs(n) <= a.max_mode ? a.mode(n) : cdouble(0.0);
    cdouble cb = std::abs(n) <= b.max_mode ? b.mode(n) : cdouble(0.0);
    acc += w(n) * std::norm(ca - cb);
  }
  return acc;
}
}  // namespace

double distance_l2(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(weighted_dist_sq(a, b, [](int) { return 1.0; }));
}

double distance_sobolev(const SpectralField& a, const SpectralField& b, double s) {
  return std::sqrt(weighted_dist_sq(a, b, [s](int n) {
    return std::pow(1.0 + static_cast<double>(n) * n, s);
  }));
}

}  // namespace gdnls
