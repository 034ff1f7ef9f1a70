#include "gdnls/timederiv.hpp"

#include <stdexcept>

namespace gdnls {

std::vector<double> series_derivative(const std::vector<double>& y, double h) {
  const int n = static_cast<int>(y.size());
  if (n < 5) throw std::invalid_argument("series_derivative: need >= 5 points");
  if (!(h > 0.0)) throw std::invalid_argument("series_derivative: h must be > 0");
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = s * (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]);
  d[1] = s * (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]);
  for (int i = 2; i < n - 2; ++i)
    d[i] = s * (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]);
  d[n - 2] = -s * (-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] -
                   6.0 * y[n - 4] + y[n - 5]);
  d[n - 1] = -s * (-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] +
                   16.0 * y[n - 4] - 3.0 * y[n - 5]);
  return d;
}

}  // namespace gdnls
