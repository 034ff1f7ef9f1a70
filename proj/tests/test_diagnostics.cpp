#include <cmath>

#include "doctest.h"
#include "gdnls/diagnostics.hpp"
#include "gdnls/initdata.hpp"

using namespace gdnls;

TEST_CASE("diagnostics row on the unit plane wave") {
  Grid g(16);
  auto u = plane_wave(16, 1.0, 1);
  DiagnosticsOptions opt;  // canonical (2, 2/3) defaults
  auto r = diagnostics_row(0.5, u, g, 2.0, Cutoff::none(), opt);
  const double pi = std::numbers::pi;
  CHECK(r.t == 0.5);
  CHECK(r.l2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.h1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r.h2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.hs == doctest::Approx(std::pow(2.0, 0.875)).epsilon(1e-14));
  CHECK(r.energy_full ==
        doctest::Approx(2.0 * pi * pi + pi / 3.0).epsilon(1e-12));
  CHECK(r.energy_cutoff == doctest::Approx(r.energy_full).epsilon(1e-13));
  CHECK(r.mod_energy ==
        doctest::Approx(16.0 * std::pow(pi, 4) + 32.0 * std::pow(pi, 3)).epsilon(1e-12));
  CHECK(std::abs(r.b1) < 1e-6);
  CHECK(std::abs(r.b2) < 1e-6);
  CHECK(std::abs(r.b3) < 1e-6);
}

TEST_CASE("csv round trip is bit exact") {
  Grid g(16);
  Trajectory traj;
  traj.times = {0.0, 0.1};
  traj.states = {random_band(16, 8, 1.0, 5), random_band(16, 8, 1.0, 6)};
  DiagnosticsOptions opt;
  auto rows = diagnostics_series(traj, g, 1.7, Cutoff::at_mode(8), opt);
  auto text = to_csv(rows);
  CHECK(text.starts_with(
      "# schema diagnostics-v1\nt,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3\n"));
  auto back = parse_diagnostics_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].t == rows[i].t);
    CHECK(back[i].h2 == rows[i].h2);
    CHECK(back[i].energy_cutoff == rows[i].energy_cutoff);
    CHECK(back[i].mod_energy == rows[i].mod_energy);
    CHECK(back[i].b3 == rows[i].b3);
  }
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS(parse_diagnostics_csv(""));
  CHECK_THROWS(parse_diagnostics_csv("wrong,header\n1,2\n"));
  CHECK_THROWS(parse_diagnostics_csv(
      "t,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3\n1,2,3\n"));
  CHECK_THROWS(parse_diagnostics_csv(
      "t,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3\n1,2,3,4,5,6,7,8,9,x,11\n"));
}
