#pragma once

#include <string>
#include <vector>

#include "conormhd/conormal.hpp"

namespace conormhd {

struct DiagnosticRow {
  double time = 0.0;
  std::string name;
  double max_norm = 0.0;
  double conormal_norm = 0.0;
};

struct GapRow {
  double time = 0.0;
  double epsilon = 0.0;
  double gap_sup = 0.0;     ///< max |U^eps - U^0|
  double gap_dy_sup = 0.0;  ///< max |d_y (U^eps - U^0)|
};

/// 17 significant digits, '.' decimal separator.
std::string format_double(double v);

std::string norms_csv(const std::vector<EnergyReport>& rows);
std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows);
std::string gaps_csv(const std::vector<GapRow>& rows);

/// Writes bytes verbatim (LF line endings are the caller's), creating parent
/// directories.
void write_file(const std::string& path, const std::string& content);

}  // namespace conormhd
