#include "gdnls/diagnostics.hpp"

#include <charconv>
#include <stdexcept>

#include "gdnls/spectral.hpp"

namespace gdnls {

DiagnosticsRow diagnostics_row(double t, const SpectralField& u, const Grid& g,
                               double sigma, const Cutoff& cut,
                               const DiagnosticsOptions& opt) {
  DiagnosticsRow r{};
  r.t = t;
  r.l2 = l2_norm(u);
  r.h1 = sobolev_norm(u, 1.0);
  r.h2 = sobolev_norm(u, 2.0);
  r.hs = sobolev_norm(u, opt.hs_exponent);
  r.energy_full = energy(u, sigma, g);
  r.energy_cutoff = cutoff_energy(u, sigma, g, cut);
  r.mod_energy = modified_energy(u, sigma, g, cut, opt.mod_params, opt.delta);
  PointwiseData p = pointwise_data(u, g, cut);
  r.b1 = b1_term(p, sigma);
  r.b2 = b2_term(p, sigma);
  r.b3 = b3_term(p, sigma, opt.delta);
  return r;
}

std::vector<DiagnosticsRow> diagnostics_series(const Trajectory& traj,
                                               const Grid& g, double sigma,
                                               const Cutoff& cut,
                                               const DiagnosticsOptions& opt) {
  std::vector<DiagnosticsRow> rows(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    rows[i] = diagnostics_row(traj.times[i], traj.states[i], g, sigma, cut, opt);
  return rows;
}

namespace {

constexpr const char* kSchemaLine = "# schema diagnostics-v1";
constexpr const char* kHeader = "t,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3";

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("diagnostics csv: bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string to_csv(const std::vector<DiagnosticsRow>& rows) {
  std::string out = kSchemaLine;
  out += '\n';
  out += kHeader;
  out += '\n';
  for (const auto& r : rows) {
    const double vals[] = {r.t,  r.l2,          r.h1,            r.h2,
                           r.hs, r.energy_full, r.energy_cutoff, r.mod_energy,
                           r.b1, r.b2,          r.b3};
    for (int i = 0; i < 11; ++i) {
      if (i) out += ',';
      append_double(out, vals[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text) {
  std::vector<DiagnosticsRow> rows;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (line == kSchemaLine) continue;
    if (first) {
      if (line != kHeader)
        throw std::runtime_error("diagnostics csv: unexpected header");
      first = false;
      continue;
    }
    double vals[11];
    std::size_t field = 0, start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= 11) throw std::runtime_error("diagnostics csv: extra fields");
        vals[field++] = parse_double(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (field != 11) throw std::runtime_error("diagnostics csv: missing fields");
    DiagnosticsRow r{};
    r.t = vals[0];
    r.l2 = vals[1];
    r.h1 = vals[2];
    r.h2 = vals[3];
    r.hs = vals[4];
    r.energy_full = vals[5];
    r.energy_cutoff = vals[6];
    r.mod_energy = vals[7];
    r.b1 = vals[8];
    r.b2 = vals[9];
    r.b3 = vals[10];
    rows.push_back(r);
  }
  if (first) throw std::runtime_error("diagnostics csv: empty input");
  return rows;
}

}  // namespace gdnls
