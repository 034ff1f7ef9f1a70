#include <cmath>
#include <set>

#include "doctest.h"
#include "gdnls/initdata.hpp"
#include "gdnls/spectral.hpp"

using namespace gdnls;

TEST_CASE("rng streams are deterministic and seed-separated") {
  Rng a(42), b(42), c(43);
  bool same = true, differ = false;
  for (int i = 0; i < 5; ++i) {
    auto x = a.next_u64();
    same = same && (x == b.next_u64());
    differ = differ || (x != c.next_u64());
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("uniform stays in [0,1), normal has the right moments") {
  Rng r(7);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);
}

TEST_CASE("derived seeds separate streams under one master") {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.insert(derive_seed(12345, i));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(12345, 7) == derive_seed(12345, 7));
  CHECK(derive_seed(12345, 7) != derive_seed(12346, 7));
}

TEST_CASE("plane wave occupies exactly one mode") {
  auto f = plane_wave(16, 1.5, -3);
  for (int n = -16; n <= 16; ++n)
    CHECK(f.mode(n) == (n == -3 ? cdouble(1.5) : cdouble(0.0)));
}

TEST_CASE("gaussian bump mean matches A w sqrt(2 pi)") {
  auto f = gaussian_bump(64, 1.0, 0.1, 0.5);
  CHECK(std::abs(f.mode(0) - cdouble(0.1 * std::sqrt(two_pi))) < 1e-10);
  // translation only rotates phases
  auto g = gaussian_bump(64, 1.0, 0.1, 0.3);
  for (int n = -64; n <= 64; ++n)
    CHECK(std::abs(f.mode(n)) == doctest::Approx(std::abs(g.mode(n))).epsilon(1e-10));
}

TEST_CASE("random band respects band, decay normalization, and seed") {
  auto f = random_band(32, 8, 1.0, 11);
  for (int n = -32; n <= 32; ++n)
    if (std::abs(n) > 8) CHECK(f.mode(n) == cdouble(0.0));
  auto g = random_band(32, 8, 1.0, 11);
  for (int i = 0; i < f.size(); ++i) CHECK(f.coeff[i] == g.coeff[i]);
}

TEST_CASE("wave packet peaks at its center with the carrier dominant") {
  auto f = wave_packet(64, 16, 0.05, 1.0, 0.5, 0.3);
  Grid g(64);
  auto s = to_physical(f, g);
  CHECK(std::abs(s[g.npoints / 2]) == doctest::Approx(1.0).epsilon(1e-6));
  int peak_mode = 0;
  double peak = -1.0;
  for (int n = -64; n <= 64; ++n)
    if (std::abs(f.mode(n)) > peak) {
      peak = std::abs(f.mode(n));
      peak_mode = n;
    }
  CHECK(peak_mode == 16);
}

TEST_CASE("structured low trio and h1 rescaling") {
  auto low = structured_low(16, 0.5);
  CHECK(low.mode(0) == cdouble(0.4));
  CHECK(low.mode(1) == cdouble(0.35));
  CHECK(low.mode(-2) == cdouble(0.1));
  auto f = scaled_to_h1(random_band(32, 16, 0.5, 3), 0.75);
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
}
