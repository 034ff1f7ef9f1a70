#include "gdnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gdnls {

void parallel_for_index(int n, const std::function<void(int)>& fn,
                        bool parallel) {
#ifdef _OPENMP
  if (parallel && n > 1) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  (void)parallel;
  for (int i = 0; i < n; ++i) fn(i);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

double gagliardo_seminorm_sq(const std::vector<std::complex<double>>& samples,
                             double gamma, double y_min, bool parallel) {
  const int m = static_cast<int>(samples.size());
  if (m < 2) throw std::invalid_argument("gagliardo_seminorm_sq: need >= 2 samples");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gagliardo_seminorm_sq: gamma must be in (0,1)");

  std::vector<double> per_shift(m, 0.0);
  parallel_for_index(
      m - 1,
      [&](int i) {
        const int l = i + 1;
        const double frac = static_cast<double>(l) / m;
        const double d = std::min(frac, 1.0 - frac);
        if (d < y_min) return;  // slot stays 0
        const double w = std::pow(d, -(1.0 + 2.0 * gamma));
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
          int k = j + l;
          if (k >= m) k -= m;
          acc += std::norm(samples[j] - samples[k]);
        }
        per_shift[l] = acc * w;
      },
      parallel);

  double total = 0.0;
  for (int l = 1; l < m; ++l) total += per_shift[l];
  return total / (static_cast<double>(m) * m);
}

}  // namespace gdnls
