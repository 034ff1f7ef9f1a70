#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "gdnls/checkpoint.hpp"
#include "json.hpp"
#include "gdnls/config.hpp"
#include "gdnls/initdata.hpp"
#include "gdnls/runner.hpp"
#include "gdnls/spectral.hpp"

using namespace gdnls;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("state json round trip is exact") {
  auto u = random_band(12, 9, 1.3, 77);
  auto text = state_to_json(u, 0.625);
  auto back = state_from_json(text);
  CHECK(back.time == 0.625);
  REQUIRE(back.field.max_mode == u.max_mode);
  for (std::size_t i = 0; i < u.coeff.size(); ++i)
    CHECK(back.field.coeff[i] == u.coeff[i]);
}

TEST_CASE("state json rejects malformed input") {
  CHECK_THROWS(state_from_json("not json"));
  CHECK_THROWS(state_from_json("{\"kind\":\"state\"}"));  // missing fields
  auto u = random_band(4, 2, 1.0, 1);
  auto j = nlohmann::json::parse(state_to_json(u, 0.0));
  j["coeffs"].erase(j["coeffs"].size() - 1);  // count mismatch
  CHECK_THROWS(state_from_json(j.dump()));
}

TEST_CASE("config parse, defaults, comments, overrides") {
  auto cfg = parse_config_text("");
  CHECK(cfg.sigma == 2.0);
  CHECK(cfg.max_mode == 64);
  CHECK(cfg.init.kind == "random_band");

  cfg = parse_config_text(
      "# comment line\n"
      "sigma = 1.5\n"
      "epsilon = 0.125\n"
      "init.kind = plane_wave\n"
      "init.n = 3\n"
      "beta = canonical\n");
  CHECK(cfg.sigma == 1.5);
  CHECK(cfg.epsilon == 0.125);
  CHECK(cfg.init.kind == "plane_wave");
  CHECK(cfg.init.n == 3);
  CHECK(resolved_beta(cfg) == doctest::Approx(2.0 / 2.5).epsilon(1e-15));

  apply_override(cfg, "dt=5e-4");
  CHECK(cfg.dt == 5e-4);
  apply_override(cfg, "init.n=-2");
  CHECK(cfg.init.n == -2);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config_text("nope = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("sigma = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("max_mode = 1.5\n"), ConfigError);
  RunConfig cfg;
  CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "mystery=3"), ConfigError);
  try {
    parse_config_text("sigma = abc\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.field == "sigma");
  }
}

TEST_CASE("serialize round trip is idempotent") {
  RunConfig cfg;
  cfg.sigma = 1.75;
  cfg.epsilon = 1.0 / 32.0;
  cfg.init.kind = "gaussian_bump";
  cfg.init.width = 0.07;
  auto text = serialize_config(cfg);
  auto text2 = serialize_config(parse_config_text(text));
  CHECK(text == text2);
  // canonical beta survives the trip as the keyword, not a number
  CHECK(text.find("beta = canonical") != std::string::npos);
}

TEST_CASE("validate rejects cross-field nonsense") {
  RunConfig cfg;
  cfg.sigma = 0.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.sigma = 2.0;
  cfg.epsilon = 1.0 / 200.0;  // cutoff 200 > max_mode 64
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.epsilon = 0.0;
  cfg.init.kind = "plane_wave";
  cfg.init.n = 100;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.init.n = 1;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("initial data dispatch covers every kind") {
  RunConfig cfg;
  cfg.max_mode = 16;

  cfg.init.kind = "plane_wave";
  cfg.init.amplitude = 0.5;
  cfg.init.n = 3;
  auto u = build_initial_data(cfg);
  CHECK(std::abs(u.mode(3)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(u.mode(2)) == 0.0);

  cfg.init.kind = "random_band";
  cfg.init.max_freq = 8;
  cfg.init.h1_target = 0.4;
  u = build_initial_data(cfg);
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(0.4).epsilon(1e-12));
  for (int n = 9; n <= 16; ++n) CHECK(std::abs(u.mode(n)) == 0.0);

  cfg.init.kind = "gaussian_bump";
  cfg.init.width = 0.1;
  cfg.init.amplitude = 1.0;
  u = build_initial_data(cfg);
  CHECK(l2_norm(u) > 0.1);

  auto dir = fresh_dir("gdnls_io_file_kind");
  auto saved = random_band(16, 6, 2.0, 12345);
  write_text_file((dir / "st.json").string(), state_to_json(saved, 0.0));
  cfg.init.kind = "file";
  cfg.init.path = (dir / "st.json").string();
  u = build_initial_data(cfg);
  REQUIRE(u.max_mode == saved.max_mode);
  for (std::size_t i = 0; i < saved.coeff.size(); ++i)
    CHECK(u.coeff[i] == saved.coeff[i]);
  fs::remove_all(dir);
}

TEST_CASE("cmd_run reruns byte-identically") {
  RunConfig cfg;
  cfg.max_mode = 8;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.record_every = 2;
  cfg.init.kind = "random_band";
  cfg.init.max_freq = 4;
  cfg.init.h1_target = 0.3;

  auto d1 = fresh_dir("gdnls_io_run_a");
  auto d2 = fresh_dir("gdnls_io_run_b");
  cfg.out_dir = d1.string();
  auto s1 = cmd_run(cfg);
  cfg.out_dir = d2.string();
  auto s2 = cmd_run(cfg);

  CHECK(s1.termination == "completed");
  CHECK(s1.records == s2.records);
  for (const char* f : {"diagnostics.csv", "final_state.json"})
    CHECK(read_text_file((d1 / f).string()) == read_text_file((d2 / f).string()));
  // resolved configs agree except for the out_dir line itself
  auto strip_out_dir = [](std::string t) {
    auto pos = t.find("out_dir");
    REQUIRE(pos != std::string::npos);
    auto end = t.find('\n', pos);
    t.erase(pos, end - pos);
    return t;
  };
  CHECK(strip_out_dir(read_text_file((d1 / "run_config.txt").string())) ==
        strip_out_dir(read_text_file((d2 / "run_config.txt").string())));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("zero initial data stays identically zero") {
  RunConfig cfg;
  cfg.max_mode = 8;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.record_every = 2;
  cfg.init.kind = "plane_wave";
  cfg.init.amplitude = 0.0;
  auto dir = fresh_dir("gdnls_io_zero");
  cfg.out_dir = dir.string();
  auto s = cmd_run(cfg);
  CHECK(s.termination == "completed");
  CHECK(s.mass_drift == 0.0);
  CHECK(s.max_h1 == 0.0);
  CHECK(s.max_h2 == 0.0);
  auto fin = state_from_json(read_text_file((dir / "final_state.json").string()));
  for (auto c : fin.field.coeff) CHECK(c == std::complex<double>(0.0, 0.0));
  fs::remove_all(dir);
}

TEST_CASE("converge rejects unusable epsilon lists") {
  RunConfig cfg;
  cfg.max_mode = 16;
  cfg.init.max_freq = 8;
  cfg.t_end = 0.01;
  cfg.dt = 1e-3;
  auto dir = fresh_dir("gdnls_io_conv");
  cfg.out_dir = dir.string();
  CHECK_THROWS_AS(cmd_converge(cfg, {0.25}), ConfigError);           // too short
  CHECK_THROWS_AS(cmd_converge(cfg, {0.25, 0.5}), ConfigError);      // increasing
  CHECK_THROWS_AS(cmd_converge(cfg, {0.25, 0.25}), ConfigError);     // not strict
  CHECK_THROWS_AS(cmd_converge(cfg, {0.25, 1e-3}), ConfigError);     // K > max_mode
  CHECK_NOTHROW(cmd_converge(cfg, {0.25, 0.125}));
  CHECK(fs::exists(dir / "convergence.json"));
  fs::remove_all(dir);
}

TEST_CASE("sweep writes one summary plus per-cell artifacts") {
  RunConfig cfg;
  cfg.max_mode = 8;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.record_every = 2;
  cfg.init.kind = "random_band";
  cfg.init.max_freq = 4;
  cfg.init.h1_target = 0.3;
  auto dir = fresh_dir("gdnls_io_sweep");
  cfg.out_dir = dir.string();
  SweepAxes ax;
  ax.sigma = {1.5, 2.0};
  ax.amplitude = {0.2, 0.3};
  auto out = cmd_sweep(cfg, ax);
  CHECK(out.cells == 4);
  CHECK(out.overflowed == 0);
  auto summary = read_text_file((dir / "sweep_summary.csv").string());
  CHECK(summary.starts_with("# schema sweep-v1\n"));
  for (int i = 0; i < 4; ++i)
    CHECK(fs::exists(dir / ("cell_" + std::to_string(i)) / "diagnostics.csv"));
  // file-kind init cannot take an amplitude axis
  RunConfig bad = cfg;
  bad.init.kind = "file";
  bad.init.path = "x.json";
  CHECK_THROWS_AS(cmd_sweep(bad, ax), ConfigError);
  fs::remove_all(dir);
}
