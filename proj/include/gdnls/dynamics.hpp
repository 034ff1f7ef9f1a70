#pragma once
#include <vector>

#include "gdnls/field.hpp"
#include "gdnls/grid.hpp"

namespace gdnls {

struct SolverParams {
  double sigma = 2.0;
  Cutoff cutoff = Cutoff::none();
  double dt = 1e-4;
  double t_end = 1.0;
  int record_every = 100;          // in steps; 0-th and final states always kept
  double h1_blowup_threshold = 0;  // <= 0: auto, 1e3 * initial H1
  double h2_alarm_threshold = 0;   // <= 0: auto, 1e6 * initial H2
};

enum class Termination {
  completed,
  h1_blowup_indicator,
  h2_growth_with_bounded_h1,
  numerical_overflow,
};
const char* to_string(Termination t);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;  // aligned with times
  Termination termination = Termination::completed;
};

// i u_xx - J(|J u|^{2σ} (J u)'); the grid band is the outermost truncation.
SpectralField rhs(const SpectralField& u, const Grid& g, double sigma,
                  const Cutoff& cut);

// One 4th-order integrating-factor Runge-Kutta step (exact linear rotation,
// RK4 on the rotated nonlinearity).
SpectralField step_ifrk4(const SpectralField& u, const Grid& g, double sigma,
                         const Cutoff& cut, double dt);

// Runs the truncated flow from J(phi). Monitors are evaluated every step;
// crossing one stops the run with the matching termination flag and keeps the
// finite prefix of records.
Trajectory evolve(const SpectralField& phi, const Grid& g, const SolverParams& p);

inline bool detect_blowup(const Trajectory& traj) {
  return traj.termination == Termination::h1_blowup_indicator ||
         traj.termination == Termination::numerical_overflow;
}

// Repeats one run over a list of cutoff resolutions and measures how far
// consecutive trajectories are from each other (max over shared record times).
struct RefinementResult {
  std::vector<double> epsilons;       // as given, coarse to fine
  std::vector<double> pair_dist_l2;   // size epsilons.size() - 1
  std::vector<double> pair_dist_h1;
  bool cauchy_decreasing = false;     // consecutive l2 distances strictly drop
};
RefinementResult refinement_study(const SpectralField& phi, const Grid& g,
                                  SolverParams base,
                                  const std::vector<double>& epsilons);

}  // namespace gdnls
