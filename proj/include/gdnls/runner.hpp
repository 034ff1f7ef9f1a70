#pragma once
#include <string>
#include <vector>

#include "gdnls/config.hpp"
#include "gdnls/dynamics.hpp"
#include "gdnls/verify.hpp"

namespace gdnls {

// Command layer: every artifact the tool writes goes through these entry
// points, so one run directory is always produced by exactly one writer.

struct RunSummary {
  std::string termination;
  double mass_drift = 0.0;    // max relative L2 drift over the records
  double energy_drift = 0.0;  // max relative truncated-energy drift
  double max_h1 = 0.0, max_h2 = 0.0;
  int records = 0;
  int exit_code() const { return termination == "numerical_overflow" ? 3 : 0; }
};

// Evolves cfg's initial data; writes diagnostics.csv, final_state.json and the
// resolved run_config.txt into cfg.out_dir.
RunSummary cmd_run(const RunConfig& cfg);

// Runs one verification probe; writes probe_<id>.json into cfg.out_dir.
ProbeReport cmd_probe(const RunConfig& cfg, const std::string& probe_id);

// Repeats the run over a strictly decreasing cutoff list; writes
// convergence.json. Throws ConfigError when the list is unusable.
RefinementResult cmd_converge(const RunConfig& cfg,
                              const std::vector<double>& epsilons);

// Cartesian parameter sweep. Empty axis = keep the base value. What the
// amplitude/frequency axes change depends on init.kind (plane wave: A and the
// mode; bump: height and 1/width; random band: H1 target and the band edge).
struct SweepAxes {
  std::vector<double> sigma, amplitude, frequency;
};
struct SweepOutcome {
  int cells = 0;
  int overflowed = 0;
};
SweepOutcome cmd_sweep(const RunConfig& base, const SweepAxes& axes);

}  // namespace gdnls
