#pragma once

#include <map>
#include <string>
#include <vector>

#include "eseek/engine.hpp"

namespace eseek {

struct ConfigValue {
  enum class Type : std::int8_t { Number, String, Boolean, NumberList };
  Type type = Type::Number;
  double number = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<double> list;
  int line = 0;
};

/// Flat document keyed by "section.key" (or bare "key" for the top level).
using ConfigDoc = std::map<std::string, ConfigValue>;

/// Parses the sectioned key/value config format (TOML-compatible subset:
/// [section] headers, key = number | "string" | true/false | [n, n, ...],
/// # comments). Diagnostics carry line numbers. Unknown keys are rejected
/// against the documented schema.
ConfigDoc parse_config(const std::string& text);

/// Everything one run needs, resolved and validated.
struct RunSpec {
  std::string name = "run";
  SchemeConfig scheme;
  MeasurementSchedule sched = MeasurementSchedule::continuous();
  CostField cost = CostField::case_study();
  EngineConfig eng;
  Vec x0;
  double band = 0.6;
  double metrics_blowup = 10.0;
};

RunSpec build_runspec(const ConfigDoc& doc);

/// One swept parameter: a schema key plus its raw value list.
struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses "key=v1,v2,..." tokens; every key is validated against the schema
/// before any run happens.
std::vector<GridAxis> parse_grid(const std::vector<std::string>& tokens);

/// Replaces one key in the document with a raw value string, parsed per the
/// schema type of the key.
ConfigDoc apply_override(ConfigDoc doc, const std::string& key, const std::string& raw);

/// All schema keys (for docs and tooling).
std::vector<std::string> config_schema_keys();

}  // namespace eseek
