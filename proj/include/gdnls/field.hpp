#pragma once
#include <complex>
#include <vector>

namespace gdnls {

using cdouble = std::complex<double>;

// Band-limited field on the unit-length torus, stored as Fourier coefficients
// of u(x) = sum_n coeff[n + max_mode] * e^{2 pi i n x} for n in [-max_mode, max_mode].
struct SpectralField {
  int max_mode = 0;
  std::vector<cdouble> coeff;

  SpectralField() = default;
  explicit SpectralField(int n_max) : max_mode(n_max), coeff(2 * n_max + 1) {}

  int size() const { return 2 * max_mode + 1; }
  cdouble& mode(int n) { return coeff[n + max_mode]; }
  cdouble mode(int n) const { return coeff[n + max_mode]; }
};

}  // namespace gdnls
