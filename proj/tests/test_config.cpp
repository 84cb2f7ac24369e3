#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "conormhd/config.hpp"

using namespace conormhd;
using nlohmann::json;

namespace {

// pointer of the ConfigError raised by parsing doc, or "none"
std::string error_pointer(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "none";
}

json reference_doc() { return to_json(reference_config()); }

}  // namespace

TEST_CASE("reference config round trip") {
  const Config ref = reference_config();
  CHECK(parse_config(to_json(ref)) == ref);
  const std::string text = canonical_text(ref);
  CHECK(parse_config_text(text) == ref);
  CHECK(canonical_text(parse_config_text(text)) == text);
  CHECK(text.back() == '\n');
  CHECK(ref.initial.amplitude == 0.0);
  CHECK(ref.grid.nx == 64);
  CHECK(ref.epsilon_list.size() == 5);
}

TEST_CASE("round trip preserves a modified config") {
  Config c = reference_config();
  c.initial.amplitude = 1e-2;
  c.grid.nx = 48;
  c.physics.lambda = -0.5;
  c.epsilon_list = {0.2, 0.05};
  c.output.dir = "results/run 1";
  c.initial.modes.push_back(Mode{2, Profile::gauss, {0.1, 0.0, 0.0, 0.0}});
  CHECK(parse_config_text(canonical_text(c)) == c);
}

TEST_CASE("viscosity conditions") {
  json doc = reference_doc();
  doc["physics"]["mu"] = 0.0;
  CHECK(error_pointer(doc) == "/physics/mu");
  doc = reference_doc();
  doc["physics"]["lambda"] = -1.0;
  CHECK(error_pointer(doc) == "/physics/lambda");
}

TEST_CASE("unknown keys are reported with their path") {
  json doc = reference_doc();
  doc["physics"]["viscocity"] = 1.0;
  CHECK(error_pointer(doc) == "/physics/viscocity");
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/physics/viscocity") != std::string::npos);
  }
  doc = reference_doc();
  doc["extra"] = true;
  CHECK(error_pointer(doc) == "/extra");
}

TEST_CASE("missing keys and wrong types") {
  json doc = reference_doc();
  doc["grid"].erase("ny");
  CHECK(error_pointer(doc) == "/grid/ny");
  doc = reference_doc();
  doc["grid"]["nx"] = "64";
  CHECK(error_pointer(doc) == "/grid/nx");
  doc = reference_doc();
  doc["grid"]["nx"] = 64.5;
  CHECK(error_pointer(doc) == "/grid/nx");
  doc = reference_doc();
  doc["initial"]["modes"][0]["profile"] = "cubic";
  CHECK(error_pointer(doc) == "/initial/modes/0/profile");
  CHECK(error_pointer(json::array()) == "");
}

TEST_CASE("cross-field validation") {
  json doc = reference_doc();
  doc["sweep"]["epsilon_list"] = {0.01, 0.1};
  CHECK(error_pointer(doc).rfind("/sweep/epsilon_list", 0) == 0);
  doc = reference_doc();
  doc["sweep"]["epsilon_list"] = {2.0};
  CHECK(error_pointer(doc).rfind("/sweep/epsilon_list", 0) == 0);
  doc = reference_doc();
  doc["time"]["report_dt"] = 0.015;
  CHECK(error_pointer(doc) == "/time/report_dt");
  doc = reference_doc();
  doc["time"]["horizon"] = 0.52;
  CHECK(error_pointer(doc) == "/time/horizon");
  doc = reference_doc();
  doc["norms"]["m"] = 4;
  CHECK(error_pointer(doc) == "/norms/m");
  doc = reference_doc();
  doc["norms"]["alpha0_max"] = 3;
  CHECK(error_pointer(doc) == "/norms/alpha0_max");
  doc = reference_doc();
  doc["stabilization"]["filter_coeff"] = 0.05;
  CHECK(error_pointer(doc) == "/stabilization/filter_coeff");
  doc = reference_doc();
  doc["grid"]["ny"] = 4;
  CHECK(error_pointer(doc).rfind("/grid", 0) == 0);
}

TEST_CASE("cadence helpers") {
  const Config c = reference_config();
  CHECK(store_per_report(c) == 5);
  CHECK(reports_in_horizon(c) == 10);
}

TEST_CASE("loading from files") {
  const auto path = std::filesystem::temp_directory_path() / "conormhd_config_test.json";
  {
    std::ofstream os(path);
    os << canonical_text(reference_config());
  }
  CHECK(load_config(path.string()) == reference_config());
  {
    std::ofstream os(path);
    os << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS(load_config(path.string()));
}
