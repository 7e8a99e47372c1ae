#include "eseek/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace eseek {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out;
  out.reserve(traj.size() * (traj.dim * 2 + 5) * 20);

  out += "t";
  for (std::size_t d = 0; d < traj.dim; ++d) out += ",x_" + std::to_string(d + 1);
  out += ",h_m,tau,alpha,phase";
  for (std::size_t d = 0; d < traj.dim; ++d) out += ",g_" + std::to_string(d + 1);
  out += "\n";

  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += format_double(traj.t[i]);
    const auto xi = traj.x_at(i);
    for (double v : xi) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(traj.h_m[i]);
    out += ',';
    out += format_double(traj.tau[i]);
    out += ',';
    out += format_double(traj.alpha[i]);
    out += ',';
    out += std::to_string(static_cast<int>(traj.phase[i]));
    const auto gi = traj.g_at(i);
    for (double v : gi) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_double(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str())
    throw ConfigError("csv: line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

Trajectory parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty input");

  const auto header = split(line, ',');
  std::size_t dim = 0;
  while (dim + 1 < header.size() && header[dim + 1] == "x_" + std::to_string(dim + 1)) ++dim;
  if (dim == 0 || header.size() != 2 * dim + 5)
    throw ConfigError("csv: unrecognized trajectory header");

  Trajectory traj;
  traj.dim = dim;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != header.size())
      throw ConfigError("csv: line " + std::to_string(line_no) + ": wrong column count");
    std::size_t c = 0;
    traj.t.push_back(to_double(parts[c++], line_no));
    for (std::size_t d = 0; d < dim; ++d) traj.x.push_back(to_double(parts[c++], line_no));
    traj.h_m.push_back(to_double(parts[c++], line_no));
    traj.tau.push_back(to_double(parts[c++], line_no));
    traj.alpha.push_back(to_double(parts[c++], line_no));
    traj.phase.push_back(static_cast<std::int8_t>(to_double(parts[c++], line_no)));
    for (std::size_t d = 0; d < dim; ++d) traj.g.push_back(to_double(parts[c++], line_no));
  }
  if (!traj.t.empty()) traj.end_time = traj.t.back();
  return traj;
}

std::string sweep_csv(const std::vector<std::string>& param_names,
                      const std::vector<std::vector<std::string>>& param_values,
                      const std::vector<RunMetrics>& results) {
  contract_check(param_values.size() == results.size(), "sweep_csv: row count mismatch");
  std::string out;
  for (const auto& name : param_names) {
    out += name;
    out += ',';
  }
  out += "steady_state_error,convergence_time,diverged,max_excursion\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    contract_check(param_values[i].size() == param_names.size(), "sweep_csv: column mismatch");
    for (const auto& v : param_values[i]) {
      out += v;
      out += ',';
    }
    const RunMetrics& m = results[i];
    out += format_double(m.steady_state_error);
    out += ',';
    if (m.convergence_time) out += format_double(*m.convergence_time);
    out += ',';
    out += m.diverged ? "true" : "false";
    out += ',';
    out += format_double(m.max_excursion);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace eseek
