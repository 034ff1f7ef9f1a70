#include "gdnls/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gdnls {

int good_size(int n) {
  if (n <= 1) return 1;
  long long best = std::numeric_limits<int>::max();
  for (long long f5 = 1; f5 < best; f5 *= 5)
    for (long long f = f5; f < best; f *= 3) {
      long long g = f;
      while (g < n) g *= 2;
      if (g < best) best = g;
    }
  return static_cast<int>(best);
}

Grid::Grid(int n_max, int oversample) : max_mode(n_max) {
  if (n_max < 1) throw std::invalid_argument("Grid: max_mode must be >= 1");
  if (oversample < 1) throw std::invalid_argument("Grid: oversample must be >= 1");
  npoints = good_size(oversample * (2 * n_max + 1));
}

Cutoff Cutoff::from_epsilon(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("Cutoff: epsilon must be > 0");
  return Cutoff{static_cast<int>(std::floor(1.0 / eps + 1e-9))};
}

}  // namespace gdnls
