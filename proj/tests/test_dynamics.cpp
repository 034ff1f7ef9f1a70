#include <cmath>

#include "doctest.h"
#include "gdnls/dynamics.hpp"
#include "gdnls/functionals.hpp"
#include "gdnls/initdata.hpp"
#include "gdnls/spectral.hpp"
#include "gdnls/timederiv.hpp"

using namespace gdnls;

namespace {

// 4th-order directional derivative of F along the flow direction at u
template <class F>
double flow_derivative(F f, const SpectralField& u, const SpectralField& udot) {
  const double h =
      1e-5 * std::sqrt(l2_norm_sq(u) / std::max(l2_norm_sq(udot), 1e-300));
  auto shifted = [&](double a) {
    SpectralField w = u;
    for (int i = 0; i < w.size(); ++i) w.coeff[i] += a * udot.coeff[i];
    return f(w);
  };
  return (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) /
         (12 * h);
}

}  // namespace

TEST_CASE("rhs of a plane wave is the exact dispersion rotation") {
  Grid g(16);
  const double a = 0.9, sigma = 1.5;
  const int n = 3;
  auto u = plane_wave(16, a, n);
  auto r = rhs(u, g, sigma, Cutoff::none());
  const double omega =
      std::pow(two_pi * n, 2) + two_pi * n * std::pow(a * a, sigma);
  CHECK(std::abs(r.mode(n) - cdouble(0.0, -omega) * u.mode(n)) <
        1e-12 * omega * a);
  for (int k = -16; k <= 16; ++k)
    if (k != n) CHECK(std::abs(r.mode(k)) < 1e-12);
}

TEST_CASE("rhs keeps a cutoff-band state inside the band") {
  Grid g(32);
  Cutoff cut = Cutoff::at_mode(10);
  auto u = apply_cutoff(random_band(32, 32, 0.5, 8), cut);
  auto r = rhs(u, g, 2.0, cut);
  for (int n = -32; n <= 32; ++n)
    if (std::abs(n) > 10) CHECK(std::abs(r.mode(n)) == 0.0);
}

TEST_CASE("conserved functionals have vanishing flow derivative; H2 does not") {
  Grid g(48);
  const double sigma = 2.0;
  Cutoff cut = Cutoff::at_mode(16);
  auto u = apply_cutoff(scaled_to_h1(random_band(48, 24, 3.0, 41), 0.8), cut);

  auto udot_cut = rhs(u, g, sigma, cut);
  auto udot_free = rhs(u, g, sigma, Cutoff::none());

  const double dmass =
      flow_derivative([](const SpectralField& w) { return l2_norm_sq(w); }, u,
                      udot_cut);
  CHECK(std::abs(dmass) < 1e-9);

  const double de_pair = flow_derivative(
      [&](const SpectralField& w) { return cutoff_energy(w, sigma, g, cut); }, u,
      udot_cut);
  CHECK(std::abs(de_pair) < 1e-9);

  const double de_full = flow_derivative(
      [&](const SpectralField& w) { return energy(w, sigma, g); }, u, udot_free);
  CHECK(std::abs(de_full) < 1e-9);

  // control with teeth: ||u''||^2 is genuinely not conserved, and the same
  // finite-difference machinery must see that clearly
  const double dt0 = flow_derivative(
      [](const SpectralField& w) { return t0_h2(w); }, u, udot_cut);
  CHECK(std::abs(dt0) > 1e-3);
  CHECK(std::abs(dt0) > 1e6 * std::abs(de_pair));
}

TEST_CASE("integrating-factor step: exact on the linear flow") {
  Grid g(8);
  auto u = plane_wave(8, 1e-8, 5);
  const double dt = 1e-3;
  auto v = step_ifrk4(u, g, 2.0, Cutoff::none(), dt);
  const cdouble expect =
      cdouble(1e-8) * std::polar(1.0, -std::pow(two_pi * 5, 2) * dt);
  CHECK(std::abs(v.mode(5) - expect) < 1e-20);
}

TEST_CASE("integrating-factor step: plane-wave one-step error is 5th order small") {
  Grid g(8);
  auto u = plane_wave(8, 1.0, 2);
  const double dt = 1e-3, sigma = 2.0;
  auto v = step_ifrk4(u, g, sigma, Cutoff::none(), dt);
  const double omega = std::pow(two_pi * 2, 2) + two_pi * 2;
  const cdouble expect = std::polar(1.0, -omega * dt);
  const double err = std::abs(v.mode(2) - expect);
  CHECK(err < 1e-9);
  CHECK(err > 1e-12);  // the nonlinear path is actually exercised
}

TEST_CASE("scheme converges at 4th order on a smooth two-mode state") {
  Grid g(16);
  auto phi = gaussian_bump(16, 0.8, 0.15, 0.5);
  SolverParams p;
  p.sigma = 2.0;
  p.t_end = 0.02;
  p.record_every = 1 << 20;  // only endpoints

  auto final_state = [&](double dt) {
    SolverParams q = p;
    q.dt = dt;
    return evolve(phi, g, q).states.back();
  };
  auto ref = final_state(1e-5);
  const double e1 = distance_l2(final_state(4e-3), ref);
  const double e2 = distance_l2(final_state(2e-3), ref);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 45.0);
}

TEST_CASE("evolve records at the requested cadence plus the final step") {
  Grid g(8);
  auto phi = plane_wave(8, 0.01, 1);
  SolverParams p;
  p.dt = 1e-3;
  p.t_end = 0.01;
  p.record_every = 3;
  auto traj = evolve(phi, g, p);
  REQUIRE(traj.times.size() == 5);
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.times[1] == doctest::Approx(0.003));
  CHECK(traj.times[4] == doctest::Approx(0.010));
  CHECK(traj.termination == Termination::completed);

  p.t_end = 0.0;
  auto still = evolve(phi, g, p);
  CHECK(still.times.size() == 1);
}

TEST_CASE("evolve applies the cutoff to the initial state") {
  Grid g(16);
  auto phi = random_band(16, 16, 0.5, 4);
  SolverParams p;
  p.cutoff = Cutoff::at_mode(5);
  p.t_end = 0.0;
  auto traj = evolve(phi, g, p);
  for (int n = -16; n <= 16; ++n)
    if (std::abs(n) > 5) CHECK(std::abs(traj.states[0].mode(n)) == 0.0);
}

TEST_CASE("short run conserves mass and the cutoff energy") {
  Grid g(32);
  auto phi = scaled_to_h1(random_band(32, 8, 1.5, 21), 0.4);
  SolverParams p;
  p.sigma = 2.0;
  p.cutoff = Cutoff::at_mode(16);
  p.dt = 1e-4;
  p.t_end = 0.02;
  p.record_every = 50;
  auto traj = evolve(phi, g, p);
  REQUIRE(traj.termination == Termination::completed);
  const double m0 = l2_norm(traj.states.front());
  const double e0 = cutoff_energy(traj.states.front(), p.sigma, g, p.cutoff);
  double dm = 0.0, de = 0.0;
  for (const auto& s : traj.states) {
    dm = std::max(dm, std::abs(l2_norm(s) / m0 - 1.0));
    de = std::max(de, std::abs(cutoff_energy(s, p.sigma, g, p.cutoff) / e0 - 1.0));
  }
  CHECK(dm < 1e-12);
  CHECK(de < 1e-8);
}

TEST_CASE("blowup monitors") {
  Grid g(16);
  SUBCASE("overflow terminates with a finite prefix") {
    SpectralField phi = plane_wave(16, 50.0, 1);
    phi.mode(2) = 5.0;
    SolverParams p;
    p.sigma = 3.0;
    p.dt = 0.1;
    p.t_end = 10.0;
    p.record_every = 1;
    auto traj = evolve(phi, g, p);
    CHECK(traj.termination == Termination::numerical_overflow);
    CHECK(detect_blowup(traj));
    REQUIRE(!traj.states.empty());
    CHECK(traj.times.size() == traj.states.size());
    for (const auto& s : traj.states)
      for (const auto& c : s.coeff) CHECK(std::isfinite(std::abs(c)));
  }
  SUBCASE("h1 threshold fires") {
    auto phi = plane_wave(16, 1.0, 1);  // H1 = sqrt(2)
    SolverParams p;
    p.h1_blowup_threshold = 1.0;
    auto traj = evolve(phi, g, p);
    CHECK(traj.termination == Termination::h1_blowup_indicator);
    CHECK(detect_blowup(traj));
    CHECK(traj.states.size() == 1);
  }
  SUBCASE("h2 alarm fires without the h1 flag") {
    auto phi = plane_wave(16, 1.0, 1);
    SolverParams p;
    p.h1_blowup_threshold = 100.0;
    p.h2_alarm_threshold = 1.0;
    auto traj = evolve(phi, g, p);
    CHECK(traj.termination == Termination::h2_growth_with_bounded_h1);
    CHECK(!detect_blowup(traj));
  }
}

TEST_CASE("coarse-to-fine cutoff runs approach each other") {
  Grid g(32);
  auto phi = gaussian_bump(32, 0.75, 0.05, 0.5);
  SolverParams p;
  p.sigma = 2.0;
  p.dt = 1e-3;
  p.t_end = 0.1;
  p.record_every = 20;
  auto res = refinement_study(phi, g, p, {1.0 / 4, 1.0 / 8, 1.0 / 16});
  REQUIRE(res.pair_dist_l2.size() == 2);
  CHECK(res.pair_dist_l2[0] > res.pair_dist_l2[1]);
  CHECK(res.pair_dist_l2[1] > 0.0);
  CHECK(res.pair_dist_h1[0] > res.pair_dist_h1[1]);
  CHECK(res.cauchy_decreasing);
}

TEST_CASE("series derivative: quartic-exact and spectrally small on sin") {
  std::vector<double> y, d_exact;
  const double h = 0.1;
  for (int i = 0; i < 9; ++i) {
    const double t = i * h;
    y.push_back(((t - 2.0) * t * t + 1.0) * t - 1.0);  // t^4 - 2t^3 + t - 1
    d_exact.push_back((4.0 * t - 6.0) * t * t + 1.0);
  }
  auto d = series_derivative(y, h);
  for (int i = 0; i < 9; ++i) CHECK(d[i] == doctest::Approx(d_exact[i]).epsilon(1e-10));

  std::vector<double> s;
  const double hs = 1e-3;
  for (int i = 0; i < 11; ++i) s.push_back(std::sin(1.0 + i * hs));
  auto ds = series_derivative(s, hs);
  for (int i = 0; i < 11; ++i)
    CHECK(std::abs(ds[i] - std::cos(1.0 + i * hs)) < 1e-11);
}
