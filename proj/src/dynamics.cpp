#include "gdnls/dynamics.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "gdnls/kernels.hpp"
#include "gdnls/spectral.hpp"

namespace gdnls {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::h1_blowup_indicator: return "h1_blowup_indicator";
    case Termination::h2_growth_with_bounded_h1: return "h2_growth_with_bounded_h1";
    case Termination::numerical_overflow: return "numerical_overflow";
  }
  return "unknown";
}

namespace {

// -J(|Jv|^{2σ} (Jv)') read back into the ambient band
SpectralField nonlinear(const SpectralField& u, const Grid& g, double sigma,
                        const Cutoff& cut) {
  const SpectralField v = apply_cutoff(u, cut);
  auto vs = to_physical(v, g);
  auto dvs = to_physical(derivative(v, 1), g);
  for (std::size_t j = 0; j < vs.size(); ++j)
    dvs[j] *= std::pow(std::norm(vs[j]), sigma);
  SpectralField w = apply_cutoff(to_spectral(dvs, u.max_mode), cut);
  for (cdouble& c : w.coeff) c = -c;
  return w;
}

struct Stepper {
  const Grid& g;
  double sigma;
  Cutoff cut;
  double dt;
  std::vector<cdouble> e_half;  // exp(-i (2 pi n)^2 dt/2) per mode

  Stepper(const Grid& g_, double sigma_, const Cutoff& cut_, double dt_)
      : g(g_), sigma(sigma_), cut(cut_), dt(dt_), e_half(2 * g_.max_mode + 1) {
    for (int n = -g.max_mode; n <= g.max_mode; ++n) {
      const double w = two_pi * n;
      e_half[n + g.max_mode] = std::polar(1.0, -w * w * 0.5 * dt);
    }
  }

  SpectralField rotate(const SpectralField& a) const {
    SpectralField r = a;
    for (int i = 0; i < a.size(); ++i) r.coeff[i] *= e_half[i];
    return r;
  }

  SpectralField step(const SpectralField& u) const {
    const int sz = u.size();
    const SpectralField k1 = nonlinear(u, g, sigma, cut);

    SpectralField tmp = u;
    for (int i = 0; i < sz; ++i) tmp.coeff[i] += 0.5 * dt * k1.coeff[i];
    const SpectralField k2 = nonlinear(rotate(tmp), g, sigma, cut);

    const SpectralField eu = rotate(u);
    tmp = eu;
    for (int i = 0; i < sz; ++i) tmp.coeff[i] += 0.5 * dt * k2.coeff[i];
    const SpectralField k3 = nonlinear(tmp, g, sigma, cut);

    const SpectralField e2u = rotate(eu);
    const SpectralField ek3 = rotate(k3);
    tmp = e2u;
    for (int i = 0; i < sz; ++i) tmp.coeff[i] += dt * ek3.coeff[i];
    const SpectralField k4 = nonlinear(tmp, g, sigma, cut);

    SpectralField k23 = k2;
    for (int i = 0; i < sz; ++i) k23.coeff[i] += k3.coeff[i];
    const SpectralField ek23 = rotate(k23);
    const SpectralField e2k1 = rotate(rotate(k1));

    SpectralField out = e2u;
    const double w = dt / 6.0;
    for (int i = 0; i < sz; ++i)
      out.coeff[i] +=
          w * (e2k1.coeff[i] + 2.0 * ek23.coeff[i] + k4.coeff[i]);
    return out;
  }
};

}  // namespace

SpectralField rhs(const SpectralField& u, const Grid& g, double sigma,
                  const Cutoff& cut) {
  SpectralField out = nonlinear(u, g, sigma, cut);
  for (int n = -u.max_mode; n <= u.max_mode; ++n) {
    const double w = two_pi * n;
    out.mode(n) += cdouble(0.0, -w * w) * u.mode(n);
  }
  return out;
}

SpectralField step_ifrk4(const SpectralField& u, const Grid& g, double sigma,
                         const Cutoff& cut, double dt) {
  if (u.max_mode != g.max_mode)
    throw std::invalid_argument("step_ifrk4: field band must match grid band");
  return Stepper(g, sigma, cut, dt).step(u);
}

Trajectory evolve(const SpectralField& phi, const Grid& g, const SolverParams& p) {
  if (phi.max_mode != g.max_mode)
    throw std::invalid_argument("evolve: field band must match grid band");
  if (!(p.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!(p.t_end >= 0.0)) throw std::invalid_argument("evolve: t_end must be >= 0");

  SpectralField u = apply_cutoff(phi, p.cutoff);

  // fixed-weight norms so the per-step monitor stays cheap
  std::vector<double> w1(u.size()), w2(u.size());
  for (int n = -g.max_mode; n <= g.max_mode; ++n) {
    const double q = 1.0 + static_cast<double>(n) * n;
    w1[n + g.max_mode] = q;
    w2[n + g.max_mode] = q * q;
  }
  auto weighted = [&](const SpectralField& f, const std::vector<double>& w) {
    double acc = 0.0;
    for (int i = 0; i < f.size(); ++i) acc += w[i] * std::norm(f.coeff[i]);
    return std::sqrt(acc);
  };

  const double h1_thr =
      p.h1_blowup_threshold > 0 ? p.h1_blowup_threshold : 1e3 * weighted(u, w1);
  const double h2_thr =
      p.h2_alarm_threshold > 0 ? p.h2_alarm_threshold : 1e6 * weighted(u, w2);

  auto monitor = [&](const SpectralField& f) -> std::optional<Termination> {
    for (const cdouble& c : f.coeff)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        return Termination::numerical_overflow;
    // strict: the zero field sits exactly on its own auto threshold
    if (weighted(f, w1) > h1_thr) return Termination::h1_blowup_indicator;
    if (weighted(f, w2) > h2_thr) return Termination::h2_growth_with_bounded_h1;
    return std::nullopt;
  };

  const long nsteps = static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9));
  const int rec = p.record_every > 0 ? p.record_every : 1;

  Trajectory traj;
  auto record = [&](double t, const SpectralField& f) {
    traj.times.push_back(t);
    traj.states.push_back(f);
  };

  if (auto bad = monitor(u)) {
    if (*bad != Termination::numerical_overflow) record(0.0, u);
    traj.termination = *bad;
    return traj;
  }
  record(0.0, u);

  Stepper st(g, p.sigma, p.cutoff, p.dt);
  for (long s = 1; s <= nsteps; ++s) {
    u = st.step(u);
    const double t = static_cast<double>(s) * p.dt;
    const auto bad = monitor(u);
    if (bad == Termination::numerical_overflow) {
      traj.termination = *bad;
      return traj;
    }
    bool recorded = false;
    if (s % rec == 0 || s == nsteps || bad) {
      record(t, u);
      recorded = true;
    }
    if (bad) {
      (void)recorded;
      traj.termination = *bad;
      return traj;
    }
  }
  return traj;
}

RefinementResult refinement_study(const SpectralField& phi, const Grid& g,
                                  SolverParams base,
                                  const std::vector<double>& epsilons) {
  RefinementResult r;
  r.epsilons = epsilons;
  if (epsilons.size() < 2)
    throw std::invalid_argument("refinement_study: need at least two resolutions");

  std::vector<Trajectory> runs(epsilons.size());
  parallel_for_index(static_cast<int>(epsilons.size()), [&](int i) {
    SolverParams p = base;
    p.cutoff = Cutoff::from_epsilon(epsilons[i]);
    runs[i] = evolve(phi, g, p);
  });

  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    const std::size_t nrec =
        std::min(runs[i].states.size(), runs[i + 1].states.size());
    double dl2 = 0.0, dh1 = 0.0;
    for (std::size_t k = 0; k < nrec; ++k) {
      dl2 = std::max(dl2, distance_l2(runs[i].states[k], runs[i + 1].states[k]));
      dh1 = std::max(dh1,
                     distance_sobolev(runs[i].states[k], runs[i + 1].states[k], 1.0));
    }
    r.pair_dist_l2.push_back(dl2);
    r.pair_dist_h1.push_back(dh1);
  }
  r.cauchy_decreasing = true;
  for (std::size_t i = 0; i + 1 < r.pair_dist_l2.size(); ++i)
    if (!(r.pair_dist_l2[i + 1] < r.pair_dist_l2[i])) r.cauchy_decreasing = false;
  return r;
}

}  // namespace gdnls
