#pragma once
#include <string>
#include <vector>

#include "gdnls/dynamics.hpp"
#include "gdnls/functionals.hpp"

namespace gdnls {

struct DiagnosticsOptions {
  double hs_exponent = 1.75;        // the fractional-norm column
  ModifiedEnergyParams mod_params;  // for the mod_energy column
  double delta = 1e-14;
};

struct DiagnosticsRow {
  double t;
  double l2, h1, h2, hs;      // sobolev norms, s = 0, 1, 2, hs_exponent
  double energy_full;         // E column
  double energy_cutoff;       // E_eps column
  double mod_energy;
  double b1, b2, b3;
};

DiagnosticsRow diagnostics_row(double t, const SpectralField& u, const Grid& g,
                               double sigma, const Cutoff& cut,
                               const DiagnosticsOptions& opt);

std::vector<DiagnosticsRow> diagnostics_series(const Trajectory& traj,
                                               const Grid& g, double sigma,
                                               const Cutoff& cut,
                                               const DiagnosticsOptions& opt);

// Round-trip CSV: header t,l2,h1,h2,hs,E,E_eps,mod_energy,B1,B2,B3 and
// shortest-exact doubles.
std::string to_csv(const std::vector<DiagnosticsRow>& rows);
std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text);

}  // namespace gdnls
