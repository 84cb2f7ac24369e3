#include "conormhd/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "conormhd/conormal.hpp"

namespace conormhd {

using nlohmann::json;

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string esc;
  for (char c : key) {
    if (c == '~') esc += "~0";
    else if (c == '/') esc += "~1";
    else esc += c;
  }
  return ptr + "/" + esc;
}

const json& object_at(const json& j, const std::string& ptr,
                      std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(child(ptr, it.key()), "unknown key");
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw ConfigError(child(ptr, k), "missing required key");
  }
  return j;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  const auto v = j.get<long long>();
  if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(ptr, "integer out of range");
  return static_cast<int>(v);
}

bool boolean(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw ConfigError(ptr, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

// Runs a validator that throws std::invalid_argument and re-raises it at ptr.
template <class F>
void checked(const std::string& ptr, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
}

bool is_multiple(double big, double small) {
  const double r = big / small;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0;
}

}  // namespace

void Config::validate() const {
  checked("/grid", [&] { grid.validate(); });
  if (grid.ny < 8) throw ConfigError("/grid/ny", "must be at least 8");
  PhysicalParams p = physics;
  p.epsilon = 0.0;
  if (!(physics.mu > 0.0)) throw ConfigError("/physics/mu", "must be > 0");
  if (!(physics.mu + physics.lambda > 0.0)) {
    throw ConfigError("/physics/lambda", "mu + lambda must be > 0");
  }
  if (!(physics.gamma >= 1.0)) throw ConfigError("/physics/gamma", "must be >= 1");
  checked("/physics", [&] { p.validate(true); });
  if (!(initial.amplitude >= 0.0)) throw ConfigError("/initial/amplitude", "must be >= 0");
  for (std::size_t k = 0; k < initial.modes.size(); ++k) {
    InitialDataSpec one{initial.amplitude, {initial.modes[k]}};
    checked("/initial/modes/" + std::to_string(k), [&] { one.validate(); });
  }

  if (!(time.horizon > 0.0)) throw ConfigError("/time/horizon", "must be > 0");
  if (!(time.cfl_adv > 0.0 && time.cfl_adv <= 1.0)) {
    throw ConfigError("/time/cfl_adv", "must lie in (0, 1]");
  }
  if (!(time.cfl_visc > 0.0 && time.cfl_visc <= 1.0)) {
    throw ConfigError("/time/cfl_visc", "must lie in (0, 1]");
  }
  if (!(time.store_dt > 0.0)) throw ConfigError("/time/store_dt", "must be > 0");
  if (!(time.report_dt > 0.0) || !is_multiple(time.report_dt, time.store_dt)) {
    throw ConfigError("/time/report_dt", "must be a positive whole multiple of store_dt");
  }
  if (!is_multiple(time.horizon, time.report_dt)) {
    throw ConfigError("/time/horizon", "must be a whole multiple of report_dt");
  }

  if (norms.m < 0 || norms.m > kMaxConormalOrder) {
    throw ConfigError("/norms/m", "must lie in [0, " + std::to_string(kMaxConormalOrder) + "]");
  }
  if (norms.alpha0_max < 0 || norms.alpha0_max > 2) {
    throw ConfigError("/norms/alpha0_max", "must lie in [0, 2]");
  }

  if (epsilon_list.empty()) throw ConfigError("/sweep/epsilon_list", "must not be empty");
  for (std::size_t k = 0; k < epsilon_list.size(); ++k) {
    const std::string ptr = "/sweep/epsilon_list/" + std::to_string(k);
    if (!(epsilon_list[k] > 0.0 && epsilon_list[k] <= 1.0)) {
      throw ConfigError(ptr, "must lie in (0, 1]");
    }
    if (k > 0 && !(epsilon_list[k] < epsilon_list[k - 1])) {
      throw ConfigError(ptr, "epsilon_list must be strictly decreasing");
    }
  }
  if (!(filter_coeff >= 0.0 && filter_coeff < 1.0 / 32.0)) {
    throw ConfigError("/stabilization/filter_coeff", "must lie in [0, 1/32)");
  }
  if (output.dir.empty()) throw ConfigError("/output/dir", "must not be empty");
}

Config reference_config() {
  Config c;
  c.initial.amplitude = 0.0;
  c.initial.modes = {Mode{1, Profile::wall3, ModeCoefficients{0.0, 1.0, 0.5, 0.5}}};
  return c;
}

Config parse_config(const json& doc) {
  Config c;
  object_at(doc, "", {"grid", "physics", "initial", "time", "norms", "sweep", "stabilization",
                      "output"});

  const json& g = object_at(doc["grid"], "/grid", {"nx", "ny", "length_x", "ymax", "stretch_beta"});
  c.grid.nx = integer(g["nx"], "/grid/nx");
  c.grid.ny = integer(g["ny"], "/grid/ny");
  c.grid.length_x = number(g["length_x"], "/grid/length_x");
  c.grid.ymax = number(g["ymax"], "/grid/ymax");
  c.grid.stretch_beta = number(g["stretch_beta"], "/grid/stretch_beta");

  const json& p = object_at(doc["physics"], "/physics", {"mu", "lambda", "gamma"});
  c.physics.mu = number(p["mu"], "/physics/mu");
  c.physics.lambda = number(p["lambda"], "/physics/lambda");
  c.physics.gamma = number(p["gamma"], "/physics/gamma");

  const json& ini = object_at(doc["initial"], "/initial", {"amplitude", "modes"});
  c.initial.amplitude = number(ini["amplitude"], "/initial/amplitude");
  if (!ini["modes"].is_array()) throw ConfigError("/initial/modes", "expected an array");
  for (std::size_t k = 0; k < ini["modes"].size(); ++k) {
    const std::string mp = "/initial/modes/" + std::to_string(k);
    const json& m = object_at(ini["modes"][k], mp, {"kx", "profile", "coeffs"});
    Mode mode;
    mode.kx = integer(m["kx"], mp + "/kx");
    try {
      mode.profile = profile_from_string(string(m["profile"], mp + "/profile"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(mp + "/profile", e.what());
    }
    const std::string cp = mp + "/coeffs";
    const json& co = object_at(m["coeffs"], cp, {"rho", "v1", "v2", "psi"});
    mode.coeffs.rho = number(co["rho"], cp + "/rho");
    mode.coeffs.v1 = number(co["v1"], cp + "/v1");
    mode.coeffs.v2 = number(co["v2"], cp + "/v2");
    mode.coeffs.psi = number(co["psi"], cp + "/psi");
    c.initial.modes.push_back(mode);
  }

  const json& t = object_at(doc["time"], "/time",
                            {"horizon", "cfl_adv", "cfl_visc", "store_dt", "report_dt"});
  c.time.horizon = number(t["horizon"], "/time/horizon");
  c.time.cfl_adv = number(t["cfl_adv"], "/time/cfl_adv");
  c.time.cfl_visc = number(t["cfl_visc"], "/time/cfl_visc");
  c.time.store_dt = number(t["store_dt"], "/time/store_dt");
  c.time.report_dt = number(t["report_dt"], "/time/report_dt");

  const json& n = object_at(doc["norms"], "/norms", {"m", "alpha0_max"});
  c.norms.m = integer(n["m"], "/norms/m");
  c.norms.alpha0_max = integer(n["alpha0_max"], "/norms/alpha0_max");

  const json& s = object_at(doc["sweep"], "/sweep", {"epsilon_list"});
  if (!s["epsilon_list"].is_array()) throw ConfigError("/sweep/epsilon_list", "expected an array");
  c.epsilon_list.clear();
  for (std::size_t k = 0; k < s["epsilon_list"].size(); ++k) {
    c.epsilon_list.push_back(
        number(s["epsilon_list"][k], "/sweep/epsilon_list/" + std::to_string(k)));
  }

  const json& st = object_at(doc["stabilization"], "/stabilization", {"filter_coeff"});
  c.filter_coeff = number(st["filter_coeff"], "/stabilization/filter_coeff");

  const json& o = object_at(doc["output"], "/output", {"dir", "dump_fields"});
  c.output.dir = string(o["dir"], "/output/dir");
  c.output.dump_fields = boolean(o["dump_fields"], "/output/dump_fields");

  c.validate();
  return c;
}

Config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

Config load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text);
}

json to_json(const Config& c) {
  json modes = json::array();
  for (const Mode& m : c.initial.modes) {
    modes.push_back({{"kx", m.kx},
                     {"profile", to_string(m.profile)},
                     {"coeffs",
                      {{"rho", m.coeffs.rho},
                       {"v1", m.coeffs.v1},
                       {"v2", m.coeffs.v2},
                       {"psi", m.coeffs.psi}}}});
  }
  return json{
      {"grid",
       {{"nx", c.grid.nx},
        {"ny", c.grid.ny},
        {"length_x", c.grid.length_x},
        {"ymax", c.grid.ymax},
        {"stretch_beta", c.grid.stretch_beta}}},
      {"physics", {{"mu", c.physics.mu}, {"lambda", c.physics.lambda}, {"gamma", c.physics.gamma}}},
      {"initial", {{"amplitude", c.initial.amplitude}, {"modes", modes}}},
      {"time",
       {{"horizon", c.time.horizon},
        {"cfl_adv", c.time.cfl_adv},
        {"cfl_visc", c.time.cfl_visc},
        {"store_dt", c.time.store_dt},
        {"report_dt", c.time.report_dt}}},
      {"norms", {{"m", c.norms.m}, {"alpha0_max", c.norms.alpha0_max}}},
      {"sweep", {{"epsilon_list", c.epsilon_list}}},
      {"stabilization", {{"filter_coeff", c.filter_coeff}}},
      {"output", {{"dir", c.output.dir}, {"dump_fields", c.output.dump_fields}}},
  };
}

std::string canonical_text(const Config& c) { return to_json(c).dump(2) + "\n"; }

int store_per_report(const Config& c) {
  return static_cast<int>(std::lround(c.time.report_dt / c.time.store_dt));
}

int reports_in_horizon(const Config& c) {
  return static_cast<int>(std::lround(c.time.horizon / c.time.report_dt));
}

}  // namespace conormhd
