#pragma once
#include <string>

#include "gdnls/field.hpp"

namespace gdnls {

// Field-state JSON: schema_version, kind:"state", max_mode, time, and coeffs
// as [re, im] pairs ordered n = -max_mode .. max_mode. Round-trips exactly.
std::string state_to_json(const SpectralField& u, double time);

struct Checkpoint {
  SpectralField field;
  double time = 0.0;
};
Checkpoint state_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gdnls
