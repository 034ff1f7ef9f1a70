#include "gdnls/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gdnls {

std::string state_to_json(const SpectralField& u, double time) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "state";
  j["max_mode"] = u.max_mode;
  j["time"] = time;
  auto& arr = j["coeffs"] = nlohmann::ordered_json::array();
  for (const cdouble& c : u.coeff) arr.push_back({c.real(), c.imag()});
  return j.dump(2) + "\n";
}

Checkpoint state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("state json: ") + e.what());
  }
  if (!j.is_object() || j.value("schema_version", 0) != 1)
    throw std::runtime_error("state json: missing or unsupported schema_version");
  if (j.value("kind", "") != "state")
    throw std::runtime_error("state json: kind must be \"state\"");
  if (!j.contains("max_mode") || !j["max_mode"].is_number_integer())
    throw std::runtime_error("state json: max_mode missing");
  const int n_max = j["max_mode"].get<int>();
  if (n_max < 1) throw std::runtime_error("state json: max_mode must be >= 1");
  if (!j.contains("coeffs") || !j["coeffs"].is_array() ||
      j["coeffs"].size() != static_cast<std::size_t>(2 * n_max + 1))
    throw std::runtime_error("state json: coeffs must hold 2*max_mode+1 pairs");
  Checkpoint cp{SpectralField(n_max), j.value("time", 0.0)};
  std::size_t i = 0;
  for (const auto& pair : j["coeffs"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      throw std::runtime_error("state json: each coeff must be [re, im]");
    cp.field.coeff[i++] = cdouble(pair[0].get<double>(), pair[1].get<double>());
  }
  return cp;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gdnls
