#include "eseek/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace eseek {

namespace {

using Type = ConfigValue::Type;

struct SchemaEntry {
  const char* key;
  Type type;
};

// clang-format off
const SchemaEntry kSchema[] = {
    {"name", Type::String},
    {"scheme.kind", Type::String},
    {"scheme.omega", Type::Number},
    {"scheme.rho", Type::Number},
    {"scheme.rho2", Type::Number},
    {"scheme.eps_prime", Type::Number},
    {"scheme.a", Type::Number},
    {"scheme.b", Type::Number},
    {"scheme.tau0", Type::Number},
    {"scheme.g_init_norm", Type::Number},
    {"fields.kind", Type::String},
    {"cost.kind", Type::String},
    {"cost.x_star", Type::NumberList},
    {"cost.q_diag", Type::NumberList},
    {"cost.c", Type::Number},
    {"measurement.preset", Type::String},
    {"measurement.Ts", Type::Number},
    {"measurement.eps", Type::Number},
    {"engine.t0", Type::Number},
    {"engine.t_end", Type::Number},
    {"engine.steps_per_dither_period", Type::Number},
    {"engine.method", Type::String},
    {"engine.sample_stride", Type::Number},
    {"engine.blowup", Type::Number},
    {"init.x0", Type::NumberList},
    {"metrics.band", Type::Number},
    {"metrics.blowup", Type::Number},
};
// clang-format on

const SchemaEntry* schema_lookup(const std::string& key) {
  for (const auto& e : kSchema)
    if (key == e.key) return &e;
  return nullptr;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config: line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || trim(std::string(end)).size() != 0)
    fail(line, "expected a number, got '" + s + "'");
  return v;
}

ConfigValue parse_value(const std::string& raw, int line) {
  ConfigValue v;
  v.line = line;
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
    v.type = Type::String;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.type = Type::Boolean;
    v.boolean = raw == "true";
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(line, "unterminated list");
    v.type = Type::NumberList;
    std::string inner = raw.substr(1, raw.size() - 2);
    std::istringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(line, "empty list element");
      v.list.push_back(parse_number(item, line));
    }
    return v;
  }
  v.type = Type::Number;
  v.number = parse_number(raw, line);
  return v;
}

const char* type_name(Type t) {
  switch (t) {
    case Type::Number: return "number";
    case Type::String: return "string";
    case Type::Boolean: return "boolean";
    case Type::NumberList: return "number list";
  }
  return "?";
}

void check_schema(const std::string& key, const ConfigValue& v) {
  const SchemaEntry* e = schema_lookup(key);
  if (!e) fail(v.line, "unknown key '" + key + "'");
  if (v.type != e->type)
    fail(v.line, "key '" + key + "' expects a " + type_name(e->type) + ", got " +
                     type_name(v.type));
}

// Typed accessors over the parsed document.

const ConfigValue* find(const ConfigDoc& doc, const std::string& key) {
  auto it = doc.find(key);
  return it == doc.end() ? nullptr : &it->second;
}

double get_number(const ConfigDoc& doc, const std::string& key, double fallback) {
  const ConfigValue* v = find(doc, key);
  return v ? v->number : fallback;
}

double require_number(const ConfigDoc& doc, const std::string& key) {
  const ConfigValue* v = find(doc, key);
  if (!v) throw ConfigError("config: missing required key '" + key + "'");
  return v->number;
}

int get_int(const ConfigDoc& doc, const std::string& key, int fallback) {
  const ConfigValue* v = find(doc, key);
  if (!v) return fallback;
  if (v->number != std::floor(v->number))
    fail(v->line, "key '" + key + "' expects an integer");
  return static_cast<int>(v->number);
}

std::string get_string(const ConfigDoc& doc, const std::string& key, std::string fallback) {
  const ConfigValue* v = find(doc, key);
  return v ? v->str : fallback;
}

}  // namespace

ConfigDoc parse_config(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key_part = trim(line.substr(0, eq));
    if (key_part.empty()) fail(line_no, "empty key");
    const std::string key = section.empty() ? key_part : section + "." + key_part;
    const ConfigValue value = parse_value(trim(line.substr(eq + 1)), line_no);
    check_schema(key, value);
    if (doc.count(key)) fail(line_no, "duplicate key '" + key + "'");
    doc[key] = value;
  }
  return doc;
}

RunSpec build_runspec(const ConfigDoc& doc) {
  RunSpec spec;
  spec.name = get_string(doc, "name", "run");

  // State dimension comes from x0.
  const ConfigValue* x0v = find(doc, "init.x0");
  if (!x0v) throw ConfigError("config: missing required key 'init.x0'");
  if (x0v->list.empty()) throw ConfigError("config: init.x0 must not be empty");
  spec.x0 = x0v->list;
  const std::size_t n = spec.x0.size();

  // Cost.
  const std::string cost_kind = get_string(doc, "cost.kind", "case-study");
  if (cost_kind == "case-study") {
    if (n != 1) throw ConfigError("config: the case-study cost is one-dimensional");
    spec.cost = CostField::case_study();
  } else if (cost_kind == "quadratic") {
    const ConfigValue* xs = find(doc, "cost.x_star");
    const ConfigValue* qd = find(doc, "cost.q_diag");
    if (!xs || !qd)
      throw ConfigError("config: quadratic cost needs cost.x_star and cost.q_diag");
    if (xs->list.size() != n || qd->list.size() != n)
      throw ConfigError("config: cost.x_star / cost.q_diag must match the x0 dimension");
    spec.cost = CostField::shifted_quadratic_diag(xs->list, qd->list,
                                                  get_number(doc, "cost.c", 10.0));
  } else {
    throw ConfigError("config: unknown cost.kind '" + cost_kind +
                      "' (expected case-study or quadratic)");
  }

  // Scheme.
  SchemeConfig& sc = spec.scheme;
  const std::string kind = get_string(doc, "scheme.kind", "");
  if (kind == "classical-continuous") sc.kind = SchemeKind::ClassicalContinuous;
  else if (kind == "classical-intermittent") sc.kind = SchemeKind::ClassicalIntermittent;
  else if (kind == "freeze") sc.kind = SchemeKind::Freeze;
  else if (kind == "gradient-hold") sc.kind = SchemeKind::GradientHold;
  else if (kind == "adaptive-amplitude") sc.kind = SchemeKind::AdaptiveAmplitude;
  else if (kind == "lie-bracket-reference") sc.kind = SchemeKind::LieBracketReference;
  else if (kind.empty()) throw ConfigError("config: missing required key 'scheme.kind'");
  else throw ConfigError("config: unknown scheme.kind '" + kind + "'");

  sc.omega = require_number(doc, "scheme.omega");
  sc.rho = require_number(doc, "scheme.rho");
  sc.rho2 = get_number(doc, "scheme.rho2", 0.0);
  sc.eps_prime = get_number(doc, "scheme.eps_prime", 0.0);
  sc.a = get_number(doc, "scheme.a", 1e-5);
  sc.b = get_number(doc, "scheme.b", 0.1);
  sc.tau0 = get_number(doc, "scheme.tau0", 0.0);
  sc.g_init_norm = get_number(doc, "scheme.g_init_norm", -1.0);

  const std::string fields_kind = get_string(doc, "fields.kind", "affine");
  if (fields_kind == "affine") sc.fields = FieldFamily::affine_pair(sc.rho, n);
  else if (fields_kind == "trig") sc.fields = FieldFamily::trig_pair(sc.rho, n);
  else throw ConfigError("config: unknown fields.kind '" + fields_kind +
                         "' (expected affine or trig)");
  sc.dithers = DitherBank::cos_sin_pairs(n);

  // Measurement.
  const std::string preset = get_string(doc, "measurement.preset", "");
  if (!preset.empty()) {
    if (preset == "arva-min") {
      spec.sched = MeasurementSchedule::arva_min();
    } else if (preset == "continuous") {
      spec.sched = MeasurementSchedule::continuous(get_number(doc, "measurement.Ts", 1.0));
    } else if (preset == "case-study") {
      spec.sched = MeasurementSchedule::case_study(require_number(doc, "measurement.eps"));
    } else {
      throw ConfigError("config: unknown measurement.preset '" + preset +
                        "' (expected case-study, arva-min or continuous)");
    }
  } else if (find(doc, "measurement.Ts") || find(doc, "measurement.eps")) {
    spec.sched = MeasurementSchedule(require_number(doc, "measurement.Ts"),
                                     require_number(doc, "measurement.eps"));
  } else {
    spec.sched = MeasurementSchedule::continuous();
  }
  if (sc.kind == SchemeKind::ClassicalContinuous) {
    spec.sched = MeasurementSchedule::continuous(spec.sched.ts());
  }

  // Engine.
  spec.eng.t0 = get_number(doc, "engine.t0", 0.0);
  spec.eng.t_end = require_number(doc, "engine.t_end");
  spec.eng.steps_per_dither_period = get_int(doc, "engine.steps_per_dither_period", 200);
  const std::string method = get_string(doc, "engine.method", "rk4");
  if (method == "rk4") spec.eng.method = IntegrationMethod::RK4;
  else if (method == "euler") spec.eng.method = IntegrationMethod::Euler;
  else throw ConfigError("config: unknown engine.method '" + method + "'");
  spec.eng.sample_stride = get_int(doc, "engine.sample_stride", 1);
  spec.eng.blowup_radius = get_number(doc, "engine.blowup", 0.0);

  spec.band = get_number(doc, "metrics.band", 0.6);
  spec.metrics_blowup = get_number(doc, "metrics.blowup", 10.0);

  spec.scheme.validate();
  spec.eng.validate();
  return spec;
}

std::vector<GridAxis> parse_grid(const std::vector<std::string>& tokens) {
  std::vector<GridAxis> axes;
  for (const std::string& tok : tokens) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("grid: expected 'key=v1,v2,...', got '" + tok + "'");
    GridAxis axis;
    axis.key = tok.substr(0, eq);
    if (!schema_lookup(axis.key))
      throw ConfigError("grid: unknown config key '" + axis.key + "'");
    std::istringstream ss(tok.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw ConfigError("grid: empty value in '" + tok + "'");
      axis.values.push_back(item);
    }
    if (axis.values.empty()) throw ConfigError("grid: no values in '" + tok + "'");
    axes.push_back(std::move(axis));
  }
  return axes;
}

ConfigDoc apply_override(ConfigDoc doc, const std::string& key, const std::string& raw) {
  const SchemaEntry* e = schema_lookup(key);
  if (!e) throw ConfigError("override: unknown config key '" + key + "'");
  ConfigValue v;
  v.type = e->type;
  v.line = 0;
  switch (e->type) {
    case Type::Number:
      v.number = parse_number(raw, 0);
      break;
    case Type::String:
      v.str = raw;
      break;
    case Type::Boolean:
      if (raw != "true" && raw != "false")
        throw ConfigError("override: key '" + key + "' expects true/false");
      v.boolean = raw == "true";
      break;
    case Type::NumberList: {
      std::istringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ';')) v.list.push_back(parse_number(item, 0));
      break;
    }
  }
  doc[key] = v;
  return doc;
}

std::vector<std::string> config_schema_keys() {
  std::vector<std::string> keys;
  for (const auto& e : kSchema) keys.emplace_back(e.key);
  return keys;
}

}  // namespace eseek
