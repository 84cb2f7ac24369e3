#include "conormhd/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace conormhd {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string norms_csv(const std::vector<EnergyReport>& rows) {
  std::string out;
  const auto names = EnergyReport::column_names();
  for (std::size_t k = 0; k < names.size(); ++k) out += (k ? "," : "") + names[k];
  out += '\n';
  for (const EnergyReport& r : rows) {
    const auto cols = r.columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k) out += ',';
      // the order column is an integer
      out += names[k] == "m" ? std::to_string(r.m) : format_double(cols[k]);
    }
    out += '\n';
  }
  return out;
}

std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows) {
  std::string out = "time,name,max_norm,conormal_norm\n";
  for (const DiagnosticRow& r : rows) {
    out += format_double(r.time) + "," + r.name + "," + format_double(r.max_norm) + "," +
           format_double(r.conormal_norm) + "\n";
  }
  return out;
}

std::string gaps_csv(const std::vector<GapRow>& rows) {
  std::string out = "time,eps,gap_sup,gap_dy_sup\n";
  for (const GapRow& r : rows) {
    out += format_double(r.time) + "," + format_double(r.epsilon) + "," +
           format_double(r.gap_sup) + "," + format_double(r.gap_dy_sup) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace conormhd
