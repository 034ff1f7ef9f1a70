#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gdnls/dynamics.hpp"
#include "gdnls/field.hpp"
#include "gdnls/grid.hpp"

namespace gdnls {

// Carries the offending key so the CLI can print a field-path diagnostic.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& fld, const std::string& msg)
      : std::runtime_error("config error at " + fld + ": " + msg), field(fld) {}
};

struct InitSpec {
  std::string kind = "random_band";  // plane_wave | gaussian_bump | random_band | file
  double amplitude = 1.0;            // plane-wave A / bump height
  int n = 1;                         // plane-wave mode
  double width = 0.1;
  double center = 0.5;
  int max_freq = 24;
  double h1_target = 0.5;
  double decay = 3.0;
  std::uint64_t seed = 0;  // 0: derived from the master seed
  std::string path;        // state json for kind = file
};

struct RunConfig {
  double sigma = 2.0;
  double epsilon = 0.0;  // > 0 switches the frequency cutoff on, K = floor(1/eps)
  int max_mode = 64;
  int oversample = 4;
  double dt = 1e-4;
  double t_end = 1.0;
  int record_every = 10;
  double h1_threshold = 0.0;  // <= 0: auto
  double h2_threshold = 0.0;
  double alpha = 2.0;
  double beta = -1.0;  // < 0: canonical 2/(sigma+1); serialized as "canonical"
  double hs_exponent = 1.75;
  double delta = 1e-14;
  std::uint64_t seed = 20240501;
  int threads = 0;  // 0: library default
  std::string out_dir;
  InitSpec init;
};

double resolved_beta(const RunConfig& cfg);
Cutoff cutoff_of(const RunConfig& cfg);
SolverParams solver_params(const RunConfig& cfg);

// Flat "key = value" text, '#' comments. Unknown keys and malformed values
// throw ConfigError naming the key. serialize(parse(text)) is idempotent.
RunConfig parse_config_text(const std::string& text);
void apply_override(RunConfig& cfg, const std::string& keyval);  // "key=value"
std::string serialize_config(const RunConfig& cfg);

// Cross-field checks (cutoff vs band, init spec vs kind); throws ConfigError.
void validate(const RunConfig& cfg);

// Dispatch on init.kind; the result is NOT cutoff-projected (evolve does that).
SpectralField build_initial_data(const RunConfig& cfg);

}  // namespace gdnls
