#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace conormhd {

/// Invalid configuration; pointer() is the JSON pointer of the offending
/// value ("" for the document root).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct TimeSpec {
  double horizon = 0.5;
  double cfl_adv = 0.4;
  double cfl_visc = 0.25;
  double store_dt = 0.01;   ///< TimeRing spacing
  double report_dt = 0.05;  ///< norms / diagnostics / gaps cadence
  bool operator==(const TimeSpec&) const = default;
};

struct NormSpec {
  int m = 2;
  int alpha0_max = 2;
  bool operator==(const NormSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  bool dump_fields = false;
  bool operator==(const OutputSpec&) const = default;
};

struct Config {
  GridSpec grid;
  PhysicalParams physics;  ///< epsilon is supplied per run, not read here
  InitialDataSpec initial;
  TimeSpec time;
  NormSpec norms;
  std::vector<double> epsilon_list{0.1, 0.03, 0.01, 0.003, 0.001};
  double filter_coeff = 0.002;
  OutputSpec output;

  /// Cross-field checks; throws ConfigError.
  void validate() const;
  bool operator==(const Config&) const = default;
};

/// Defaults: the trivial amplitude-zero configuration.
Config reference_config();

Config parse_config(const nlohmann::json& doc);
Config parse_config_text(const std::string& text);
/// Reads a file, or standard input when path is "-".
Config load_config(const std::string& path);

nlohmann::json to_json(const Config& c);
/// Canonical two-space indented serialization with a trailing newline.
std::string canonical_text(const Config& c);

/// Number of store_dt intervals in report_dt and horizon (both exact).
int store_per_report(const Config& c);
int reports_in_horizon(const Config& c);

}  // namespace conormhd
