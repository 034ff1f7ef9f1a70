#include "gdnls/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string_view>

#include "gdnls/checkpoint.hpp"
#include "gdnls/functionals.hpp"
#include "gdnls/initdata.hpp"

namespace gdnls {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(const std::string& key, std::string_view v) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "expected a number, got \"" + std::string(v) + "\"");
  return x;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view v) {
  Int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "expected an integer, got \"" + std::string(v) + "\"");
  return x;
}

std::string fmt_double(double x) {
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), p);
}

template <class Int>
std::string fmt_int(Int x) {
  std::array<char, 24> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), p);
}

constexpr const char* kKeyOrder[] = {
    "sigma",         "epsilon",        "max_mode",    "oversample",
    "dt",            "t_end",          "record_every", "h1_threshold",
    "h2_threshold",  "alpha",          "beta",        "hs_exponent",
    "delta",         "seed",           "threads",     "out_dir",
    "init.kind",     "init.amplitude", "init.n",      "init.width",
    "init.center",   "init.max_freq",  "init.h1_target", "init.decay",
    "init.seed",     "init.path",
};

void set_key(RunConfig& c, const std::string& key, std::string_view v) {
  if (key == "sigma") c.sigma = parse_double(key, v);
  else if (key == "epsilon") c.epsilon = parse_double(key, v);
  else if (key == "max_mode") c.max_mode = parse_int<int>(key, v);
  else if (key == "oversample") c.oversample = parse_int<int>(key, v);
  else if (key == "dt") c.dt = parse_double(key, v);
  else if (key == "t_end") c.t_end = parse_double(key, v);
  else if (key == "record_every") c.record_every = parse_int<int>(key, v);
  else if (key == "h1_threshold") c.h1_threshold = parse_double(key, v);
  else if (key == "h2_threshold") c.h2_threshold = parse_double(key, v);
  else if (key == "alpha") c.alpha = parse_double(key, v);
  else if (key == "beta") c.beta = (v == "canonical") ? -1.0 : parse_double(key, v);
  else if (key == "hs_exponent") c.hs_exponent = parse_double(key, v);
  else if (key == "delta") c.delta = parse_double(key, v);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
  else if (key == "threads") c.threads = parse_int<int>(key, v);
  else if (key == "out_dir") c.out_dir = std::string(v);
  else if (key == "init.kind") c.init.kind = std::string(v);
  else if (key == "init.amplitude") c.init.amplitude = parse_double(key, v);
  else if (key == "init.n") c.init.n = parse_int<int>(key, v);
  else if (key == "init.width") c.init.width = parse_double(key, v);
  else if (key == "init.center") c.init.center = parse_double(key, v);
  else if (key == "init.max_freq") c.init.max_freq = parse_int<int>(key, v);
  else if (key == "init.h1_target") c.init.h1_target = parse_double(key, v);
  else if (key == "init.decay") c.init.decay = parse_double(key, v);
  else if (key == "init.seed") c.init.seed = parse_int<std::uint64_t>(key, v);
  else if (key == "init.path") c.init.path = std::string(v);
  else throw ConfigError(key, "unknown key");
}

std::string get_key(const RunConfig& c, const std::string& key) {
  if (key == "sigma") return fmt_double(c.sigma);
  if (key == "epsilon") return fmt_double(c.epsilon);
  if (key == "max_mode") return fmt_int(c.max_mode);
  if (key == "oversample") return fmt_int(c.oversample);
  if (key == "dt") return fmt_double(c.dt);
  if (key == "t_end") return fmt_double(c.t_end);
  if (key == "record_every") return fmt_int(c.record_every);
  if (key == "h1_threshold") return fmt_double(c.h1_threshold);
  if (key == "h2_threshold") return fmt_double(c.h2_threshold);
  if (key == "alpha") return fmt_double(c.alpha);
  if (key == "beta") return c.beta < 0 ? "canonical" : fmt_double(c.beta);
  if (key == "hs_exponent") return fmt_double(c.hs_exponent);
  if (key == "delta") return fmt_double(c.delta);
  if (key == "seed") return fmt_int(c.seed);
  if (key == "threads") return fmt_int(c.threads);
  if (key == "out_dir") return c.out_dir;
  if (key == "init.kind") return c.init.kind;
  if (key == "init.amplitude") return fmt_double(c.init.amplitude);
  if (key == "init.n") return fmt_int(c.init.n);
  if (key == "init.width") return fmt_double(c.init.width);
  if (key == "init.center") return fmt_double(c.init.center);
  if (key == "init.max_freq") return fmt_int(c.init.max_freq);
  if (key == "init.h1_target") return fmt_double(c.init.h1_target);
  if (key == "init.decay") return fmt_double(c.init.decay);
  if (key == "init.seed") return fmt_int(c.init.seed);
  if (key == "init.path") return c.init.path;
  throw ConfigError(key, "unknown key");
}

}  // namespace

double resolved_beta(const RunConfig& cfg) {
  return cfg.beta < 0 ? canonical_beta(cfg.sigma) : cfg.beta;
}

Cutoff cutoff_of(const RunConfig& cfg) {
  return cfg.epsilon > 0 ? Cutoff::from_epsilon(cfg.epsilon) : Cutoff::none();
}

SolverParams solver_params(const RunConfig& cfg) {
  SolverParams p;
  p.sigma = cfg.sigma;
  p.cutoff = cutoff_of(cfg);
  p.dt = cfg.dt;
  p.t_end = cfg.t_end;
  p.record_every = cfg.record_every;
  p.h1_blowup_threshold = cfg.h1_threshold;
  p.h2_alarm_threshold = cfg.h2_threshold;
  return p;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (auto h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), "expected key = value");
    set_key(cfg, std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& keyval) {
  auto eq = keyval.find('=');
  if (eq == std::string::npos)
    throw ConfigError(keyval, "expected key=value");
  set_key(cfg, std::string(trim(std::string_view(keyval).substr(0, eq))),
          trim(std::string_view(keyval).substr(eq + 1)));
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const char* key : kKeyOrder) {
    out += key;
    out += " = ";
    out += get_key(cfg, key);
    out += '\n';
  }
  return out;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.sigma > 1.0)) throw ConfigError("sigma", "must be > 1");
  if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon", "must be >= 0");
  if (cfg.max_mode < 1) throw ConfigError("max_mode", "must be >= 1");
  if (cfg.oversample < 1) throw ConfigError("oversample", "must be >= 1");
  if (cfg.epsilon > 0.0) {
    if (cfg.epsilon > 1.0) throw ConfigError("epsilon", "must be <= 1");
    if (Cutoff::from_epsilon(cfg.epsilon).cutoff_mode > cfg.max_mode)
      throw ConfigError("epsilon", "cutoff mode exceeds max_mode");
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw ConfigError("dt", "must be a positive number");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end", "must be >= 0");
  if (cfg.record_every < 1) throw ConfigError("record_every", "must be >= 1");
  if (!(cfg.hs_exponent > 0.0)) throw ConfigError("hs_exponent", "must be > 0");
  if (!(cfg.delta >= 0.0)) throw ConfigError("delta", "must be >= 0");
  if (cfg.threads < 0) throw ConfigError("threads", "must be >= 0");
  const std::string& k = cfg.init.kind;
  if (k == "plane_wave") {
    if (std::abs(cfg.init.n) > cfg.max_mode)
      throw ConfigError("init.n", "mode exceeds max_mode");
  } else if (k == "gaussian_bump") {
    if (!(cfg.init.width > 0.0)) throw ConfigError("init.width", "must be > 0");
  } else if (k == "random_band") {
    if (cfg.init.max_freq < 0 || cfg.init.max_freq > cfg.max_mode)
      throw ConfigError("init.max_freq", "must lie in [0, max_mode]");
    if (!(cfg.init.h1_target >= 0.0))
      throw ConfigError("init.h1_target", "must be >= 0");
    if (!(cfg.init.decay >= 0.0)) throw ConfigError("init.decay", "must be >= 0");
  } else if (k == "file") {
    if (cfg.init.path.empty()) throw ConfigError("init.path", "must be set");
  } else {
    throw ConfigError("init.kind",
                      "must be plane_wave, gaussian_bump, random_band, or file");
  }
}

SpectralField build_initial_data(const RunConfig& cfg) {
  validate(cfg);
  const std::string& k = cfg.init.kind;
  if (k == "plane_wave")
    return plane_wave(cfg.max_mode, cfg.init.amplitude, cfg.init.n);
  if (k == "gaussian_bump")
    return gaussian_bump(cfg.max_mode, cfg.init.amplitude, cfg.init.width,
                         cfg.init.center);
  if (k == "random_band") {
    const std::uint64_t s =
        cfg.init.seed ? cfg.init.seed : derive_seed(cfg.seed, 0);
    return scaled_to_h1(
        random_band(cfg.max_mode, cfg.init.max_freq, cfg.init.decay, s),
        cfg.init.h1_target);
  }
  // file
  Checkpoint cp{SpectralField(1), 0.0};
  try {
    cp = state_from_json(read_text_file(cfg.init.path));
  } catch (const std::exception& e) {
    throw ConfigError("init.path", e.what());
  }
  if (cp.field.max_mode > cfg.max_mode)
    throw ConfigError("init.path", "stored band exceeds max_mode");
  SpectralField u(cfg.max_mode);
  for (int n = -cp.field.max_mode; n <= cp.field.max_mode; ++n)
    u.mode(n) = cp.field.mode(n);
  return u;
}

}  // namespace gdnls
