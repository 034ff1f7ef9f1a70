#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdnls/checkpoint.hpp"
#include "gdnls/runner.hpp"

namespace {

using namespace gdnls;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config_path,
                  "flat key = value config file ('#' comments)");
  cmd->add_option("--set", c.sets,
                  "override one config key, key=value (repeatable)");
  cmd->add_option("--out", c.out, "output directory (beats config and env)");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--threads", c.threads, "worker thread cap, 0 = default");
}

// precedence: dedicated flags > --set > config file > built-in defaults
RunConfig make_config(const CommonArgs& c, const CLI::App& cmd) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    std::string text;
    try {
      text = read_text_file(c.config_path);
    } catch (const std::exception& e) {
      throw ConfigError("config", e.what());
    }
    cfg = parse_config_text(text);
  }
  for (const auto& kv : c.sets) apply_override(cfg, kv);
  if (cmd.count("--out")) cfg.out_dir = c.out;
  if (cmd.count("--seed")) cfg.seed = c.seed;
  if (cmd.count("--threads")) cfg.threads = c.threads;
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("GDNLS_OUT_DIR");
    cfg.out_dir = (env && *env) ? env : "./out";
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectral simulator and verification harness for a derivative "
      "nonlinear Schrodinger flow on the unit torus"};
  app.require_subcommand(1);

  CommonArgs run_c, probe_c, conv_c, sweep_c;
  auto* run_cmd =
      app.add_subcommand("run", "evolve one configuration, write diagnostics");
  add_common(run_cmd, run_c);

  auto* probe_cmd = app.add_subcommand("probe", "run one verification probe");
  add_common(probe_cmd, probe_c);
  std::string probe_id;
  bool list_probes = false;
  probe_cmd->add_option("id", probe_id, "probe id (see --list)");
  probe_cmd->add_flag("--list", list_probes, "print the probe ids and exit");

  auto* conv_cmd =
      app.add_subcommand("converge", "repeat the run over finer cutoffs");
  add_common(conv_cmd, conv_c);
  std::vector<double> epsilons;
  conv_cmd->add_option("--epsilons", epsilons,
                       "comma-separated strictly decreasing cutoff list")
      ->delimiter(',')
      ->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "cartesian parameter sweep");
  add_common(sweep_cmd, sweep_c);
  SweepAxes axes;
  sweep_cmd->add_option("--sigmas", axes.sigma, "nonlinearity powers")
      ->delimiter(',');
  sweep_cmd
      ->add_option("--amplitudes", axes.amplitude,
                   "initial-data sizes (meaning depends on init.kind)")
      ->delimiter(',');
  sweep_cmd
      ->add_option("--frequencies", axes.frequency,
                   "initial-data frequency scales (meaning depends on init.kind)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run_cmd) {
      auto s = cmd_run(make_config(run_c, *run_cmd));
      std::cout << "termination=" << s.termination << " records=" << s.records
                << " mass_drift=" << s.mass_drift
                << " e_eps_drift=" << s.energy_drift << " max_h1=" << s.max_h1
                << " max_h2=" << s.max_h2 << "\n";
      return s.exit_code();
    }
    if (*probe_cmd) {
      if (list_probes) {
        for (const auto& id : probe_ids()) std::cout << id << "\n";
        return 0;
      }
      if (probe_id.empty()) {
        std::cerr << "probe: missing probe id (try --list)\n";
        return 2;
      }
      auto rep = cmd_probe(make_config(probe_c, *probe_cmd), probe_id);
      std::cout << "probe " << rep.probe_id << ": " << rep.verdict << "\n";
      return rep.exit_code();
    }
    if (*conv_cmd) {
      auto res = cmd_converge(make_config(conv_c, *conv_cmd), epsilons);
      bool finite = true;
      for (std::size_t i = 0; i < res.pair_dist_l2.size(); ++i) {
        std::cout << "d(" << res.epsilons[i] << ", " << res.epsilons[i + 1]
                  << ") = " << res.pair_dist_l2[i] << "\n";
        finite = finite && std::isfinite(res.pair_dist_l2[i]);
      }
      std::cout << "cauchy_decreasing="
                << (res.cauchy_decreasing ? "true" : "false") << "\n";
      return finite ? 0 : 3;
    }
    if (*sweep_cmd) {
      auto cfg = make_config(sweep_c, *sweep_cmd);
      auto out = cmd_sweep(cfg, axes);
      std::cout << "sweep: " << out.cells << " cells, " << out.overflowed
                << " overflowed -> " << cfg.out_dir << "\n";
      return (out.cells > 0 && out.overflowed == out.cells) ? 3 : 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
