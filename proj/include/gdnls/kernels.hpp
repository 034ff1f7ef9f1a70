#pragma once
#include <complex>
#include <functional>
#include <vector>

namespace gdnls {

// Runs fn(0), ..., fn(n-1); with OpenMP available and parallel=true the
// indices run concurrently. Each call must write only its own output slots,
// so serial and parallel execution produce identical results.
void parallel_for_index(int n, const std::function<void(int)>& fn,
                        bool parallel = true);
int max_threads();
void set_thread_count(int n);  // caps the worker pool; n <= 0 leaves it alone

// Fractional seminorm of order gamma in (0,1) via the full lattice double sum
//   (1/M^2) sum_{j,l>0} |u_j - u_{j+l}|^2 / d(l/M)^{1+2*gamma},
// d = distance on the unit torus, shifts with d < y_min excluded. The serial
// and parallel paths sum per-shift partials in the same order (bit-identical).
double gagliardo_seminorm_sq(const std::vector<std::complex<double>>& samples,
                             double gamma, double y_min, bool parallel);

}  // namespace gdnls
