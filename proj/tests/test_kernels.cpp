#include <cmath>

#include "doctest.h"
#include "gdnls/initdata.hpp"
#include "gdnls/kernels.hpp"
#include "gdnls/spectral.hpp"

using namespace gdnls;

TEST_CASE("parallel_for_index covers every slot in both modes") {
  for (bool par : {false, true}) {
    std::vector<int> hit(100, 0);
    parallel_for_index(100, [&](int i) { hit[i] = i + 1; }, par);
    for (int i = 0; i < 100; ++i) CHECK(hit[i] == i + 1);
  }
  CHECK(max_threads() >= 1);
}

TEST_CASE("lattice seminorm agrees with the orthogonality route") {
  // sum_j |u_j - u_{j+l}|^2 = M sum_n |c_n|^2 |e^{2 pi i n l / M} - 1|^2,
  // so the double sum must equal a weighted mode sum.
  auto f = random_band(16, 16, 1.0, 17);
  Grid g(16);
  auto s = to_physical(f, g);
  const int m = g.npoints;
  const double gamma = 0.75, y_min = 0.5 / m;

  double expect = 0.0;
  for (int n = -16; n <= 16; ++n) {
    double w = 0.0;
    for (int l = 1; l < m; ++l) {
      const double frac = static_cast<double>(l) / m;
      const double d = std::min(frac, 1.0 - frac);
      if (d < y_min) continue;
      const double osc = 4.0 * std::pow(std::sin(std::numbers::pi * n * frac), 2);
      w += osc * std::pow(d, -(1.0 + 2.0 * gamma));
    }
    expect += std::norm(f.mode(n)) * w / m;
  }
  const double got = gagliardo_seminorm_sq(s, gamma, y_min, false);
  CHECK(got == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("serial and parallel seminorm sums are bit-identical") {
  auto f = random_band(32, 32, 0.5, 23);
  auto s = to_physical(f, Grid(32));
  const double a = gagliardo_seminorm_sq(s, 0.6, 0.0, false);
  const double b = gagliardo_seminorm_sq(s, 0.6, 0.0, true);
  CHECK(a == b);
  CHECK(a > 0.0);
}

TEST_CASE("seminorm vanishes exactly on constants") {
  std::vector<cdouble> s(270, cdouble(2.5, -1.0));
  CHECK(gagliardo_seminorm_sq(s, 0.75, 0.0, false) == 0.0);
}
