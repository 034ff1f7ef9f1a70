// Times the parallel kernels against their serial twins and checks that both
// paths produce bit-identical values.
#include <chrono>
#include <iostream>
#include <vector>

#include "gdnls/initdata.hpp"
#include "gdnls/kernels.hpp"
#include "gdnls/spectral.hpp"

using namespace gdnls;

namespace {

template <class Fn>
double best_ms(const Fn& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::cout << "threads available: " << max_threads() << "\n\n";

  // fractional seminorm, one large grid
  Grid g(128);
  auto u = random_band(128, 128, 1.2, 7);
  auto phys = to_physical(u, g);
  const double y_min = 0.5 / g.npoints;
  double serial_val = 0.0, parallel_val = 0.0;
  const double t_serial = best_ms(
      [&] { serial_val = gagliardo_seminorm_sq(phys, 0.75, y_min, false); }, 3);
  const double t_parallel = best_ms(
      [&] { parallel_val = gagliardo_seminorm_sq(phys, 0.75, y_min, true); }, 3);
  std::cout << "fractional seminorm, " << g.npoints << " samples\n"
            << "  serial   " << t_serial << " ms\n"
            << "  parallel " << t_parallel << " ms  (x"
            << t_serial / t_parallel << ")\n"
            << "  bit-identical: " << (serial_val == parallel_val ? "yes" : "NO")
            << "\n\n";

  // batch norm evaluation over independent fields
  const int batch = 32;
  Grid gb(32);
  std::vector<std::vector<cdouble>> fields;
  for (int i = 0; i < batch; ++i)
    fields.push_back(to_physical(random_band(32, 32, 1.0, 100 + i), gb));
  const double yb = 0.5 / gb.npoints;
  std::vector<double> out_s(batch), out_p(batch);
  const double tb_serial = best_ms(
      [&] {
        for (int i = 0; i < batch; ++i)
          out_s[i] = gagliardo_seminorm_sq(fields[i], 0.6, yb, false);
      },
      3);
  const double tb_parallel = best_ms(
      [&] {
        parallel_for_index(
            batch,
            [&](int i) {
              out_p[i] = gagliardo_seminorm_sq(fields[i], 0.6, yb, false);
            },
            true);
      },
      3);
  bool same = out_s == out_p;
  std::cout << "batch of " << batch << " seminorms, " << gb.npoints
            << " samples each\n"
            << "  serial loop    " << tb_serial << " ms\n"
            << "  parallel batch " << tb_parallel << " ms  (x"
            << tb_serial / tb_parallel << ")\n"
            << "  bit-identical: " << (same ? "yes" : "NO") << "\n";
  return (serial_val == parallel_val && same) ? 0 : 1;
}
