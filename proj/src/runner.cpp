#include "gdnls/runner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "gdnls/checkpoint.hpp"
#include "gdnls/diagnostics.hpp"
#include "gdnls/kernels.hpp"
#include "json.hpp"

namespace gdnls {

namespace {

std::string fmt(double x) {
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), p);
}

struct DriftStats {
  double mass = 0.0, energy = 0.0, max_h1 = 0.0, max_h2 = 0.0;
};

DriftStats drift_stats(const std::vector<DiagnosticsRow>& rows) {
  DriftStats d;
  if (rows.empty()) return d;
  const double m0 = rows.front().l2;
  const double e0 = rows.front().energy_cutoff;
  const double edenom = std::max(std::abs(e0), 1e-12);
  for (const auto& r : rows) {
    if (m0 > 1e-300) d.mass = std::max(d.mass, std::abs(r.l2 - m0) / m0);
    d.energy = std::max(d.energy, std::abs(r.energy_cutoff - e0) / edenom);
    d.max_h1 = std::max(d.max_h1, r.h1);
    d.max_h2 = std::max(d.max_h2, r.h2);
  }
  return d;
}

struct CellResult {
  std::string csv, state_json;
  std::string termination;
  DriftStats drifts;
};

CellResult run_cell(const RunConfig& cfg) {
  auto phi = build_initial_data(cfg);
  Grid g(cfg.max_mode, cfg.oversample);
  auto traj = evolve(phi, g, solver_params(cfg));
  DiagnosticsOptions opt;
  opt.hs_exponent = cfg.hs_exponent;
  opt.mod_params.alpha = cfg.alpha;
  opt.mod_params.beta = resolved_beta(cfg);
  opt.delta = cfg.delta;
  auto rows = diagnostics_series(traj, g, cfg.sigma, cutoff_of(cfg), opt);
  CellResult c;
  c.csv = to_csv(rows);
  c.state_json = state_to_json(traj.states.back(), traj.times.back());
  c.termination = to_string(traj.termination);
  c.drifts = drift_stats(rows);
  return c;
}

void apply_amplitude(RunConfig& cfg, double a) {
  if (cfg.init.kind == "random_band")
    cfg.init.h1_target = a;
  else
    cfg.init.amplitude = a;
}

void apply_frequency(RunConfig& cfg, double f) {
  if (cfg.init.kind == "plane_wave") {
    cfg.init.n = static_cast<int>(std::lround(f));
  } else if (cfg.init.kind == "gaussian_bump") {
    if (!(f > 0)) throw ConfigError("sweep.frequency", "bump frequency must be > 0");
    cfg.init.width = 1.0 / f;
  } else {
    cfg.init.max_freq = static_cast<int>(std::lround(f));
  }
}

double effective_amplitude(const RunConfig& cfg) {
  return cfg.init.kind == "random_band" ? cfg.init.h1_target
                                        : cfg.init.amplitude;
}

double effective_frequency(const RunConfig& cfg) {
  if (cfg.init.kind == "plane_wave") return cfg.init.n;
  if (cfg.init.kind == "gaussian_bump") return 1.0 / cfg.init.width;
  return cfg.init.max_freq;
}

}  // namespace

RunSummary cmd_run(const RunConfig& cfg) {
  validate(cfg);
  set_thread_count(cfg.threads);
  CellResult c = run_cell(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_text_file(cfg.out_dir + "/diagnostics.csv", c.csv);
  write_text_file(cfg.out_dir + "/final_state.json", c.state_json);
  write_text_file(cfg.out_dir + "/run_config.txt", serialize_config(cfg));
  RunSummary s;
  s.termination = c.termination;
  s.mass_drift = c.drifts.mass;
  s.energy_drift = c.drifts.energy;
  s.max_h1 = c.drifts.max_h1;
  s.max_h2 = c.drifts.max_h2;
  s.records = static_cast<int>(std::count(c.csv.begin(), c.csv.end(), '\n')) - 2;
  return s;
}

ProbeReport cmd_probe(const RunConfig& cfg, const std::string& probe_id) {
  validate(cfg);
  set_thread_count(cfg.threads);
  ProbeSettings s;
  s.sigma = cfg.sigma;
  s.seed = cfg.seed;
  s.delta = cfg.delta;
  auto report = run_probe(probe_id, s);
  std::filesystem::create_directories(cfg.out_dir);
  write_text_file(cfg.out_dir + "/probe_" + probe_id + ".json",
                  report.to_json());
  return report;
}

RefinementResult cmd_converge(const RunConfig& cfg,
                              const std::vector<double>& epsilons) {
  validate(cfg);
  set_thread_count(cfg.threads);
  if (epsilons.size() < 2)
    throw ConfigError("epsilons", "need at least two refinement levels");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0))
      throw ConfigError("epsilons", "levels must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw ConfigError("epsilons", "levels must be strictly decreasing");
    const int k = static_cast<int>(std::floor(1.0 / epsilons[i]));
    if (k > cfg.max_mode)
      throw ConfigError("epsilons", "cutoff " + fmt(epsilons[i]) +
                                        " needs modes beyond max_mode");
  }
  auto phi = build_initial_data(cfg);
  Grid g(cfg.max_mode, cfg.oversample);
  auto res = refinement_study(phi, g, solver_params(cfg), epsilons);
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "convergence";
  j["epsilons"] = res.epsilons;
  j["pair_dist_l2"] = res.pair_dist_l2;
  j["pair_dist_h1"] = res.pair_dist_h1;
  j["cauchy_decreasing"] = res.cauchy_decreasing;
  std::filesystem::create_directories(cfg.out_dir);
  write_text_file(cfg.out_dir + "/convergence.json", j.dump(2) + "\n");
  return res;
}

SweepOutcome cmd_sweep(const RunConfig& base, const SweepAxes& axes) {
  validate(base);
  set_thread_count(base.threads);
  if (base.init.kind == "file" &&
      (!axes.amplitude.empty() || !axes.frequency.empty()))
    throw ConfigError("sweep",
                      "file initial data cannot be swept in amplitude or frequency");
  const std::vector<double> sig = axes.sigma.empty()
                                      ? std::vector<double>{base.sigma}
                                      : axes.sigma;
  const std::vector<double> amp =
      axes.amplitude.empty() ? std::vector<double>{effective_amplitude(base)}
                             : axes.amplitude;
  const std::vector<double> freq =
      axes.frequency.empty() ? std::vector<double>{effective_frequency(base)}
                             : axes.frequency;

  std::vector<RunConfig> cells;
  for (double s : sig)
    for (double a : amp)
      for (double f : freq) {
        RunConfig c = base;
        c.sigma = s;
        if (!axes.amplitude.empty()) apply_amplitude(c, a);
        if (!axes.frequency.empty()) apply_frequency(c, f);
        validate(c);  // fail the whole sweep before launching anything
        cells.push_back(std::move(c));
      }

  std::vector<CellResult> results(cells.size());
  parallel_for_index(
      static_cast<int>(cells.size()),
      [&](int i) { results[i] = run_cell(cells[i]); }, true);

  // single writer for everything the sweep produced
  std::filesystem::create_directories(base.out_dir);
  std::string summary = "# schema sweep-v1\n";
  summary +=
      "sigma,amplitude,frequency,termination,max_h1,max_h2,mass_drift,e_eps_drift\n";
  SweepOutcome out;
  out.cells = static_cast<int>(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string dir = base.out_dir + "/cell_" + std::to_string(i);
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/diagnostics.csv", results[i].csv);
    write_text_file(dir + "/final_state.json", results[i].state_json);
    write_text_file(dir + "/run_config.txt", serialize_config(cells[i]));
    if (results[i].termination == "numerical_overflow") ++out.overflowed;
    summary += fmt(cells[i].sigma) + "," + fmt(effective_amplitude(cells[i])) +
               "," + fmt(effective_frequency(cells[i])) + "," +
               results[i].termination + "," + fmt(results[i].drifts.max_h1) +
               "," + fmt(results[i].drifts.max_h2) + "," +
               fmt(results[i].drifts.mass) + "," + fmt(results[i].drifts.energy) +
               "\n";
  }
  write_text_file(base.out_dir + "/sweep_summary.csv", summary);
  return out;
}

}  // namespace gdnls
