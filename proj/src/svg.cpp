#include "eseek/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace eseek {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string trajectory_svg(const Trajectory& traj, std::span<const double> x_star,
                           const std::string& title) {
  contract_check(traj.size() > 0, "svg: empty trajectory");

  const double width = 900, height = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  const double t_min = traj.t.front(), t_max = traj.t.back();
  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (double v : traj.x_at(i)) {
      if (first) {
        y_min = y_max = v;
        first = false;
      } else {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
    }
  }
  for (double v : x_star) {
    y_min = std::min(y_min, v);
    y_max = std::max(y_max, v);
  }
  if (y_max - y_min < 1e-12) {
    y_max += 1.0;
    y_min -= 1.0;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double t_span = t_max > t_min ? t_max - t_min : 1.0;
  auto px = [&](double t) { return ml + pw * (t - t_min) / t_span; };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << xml_escape(title) << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"#333\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
     << mt + ph << "\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
     << "\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double tv = t_min + t_span * k / 5.0;
    const double yv = y_min + (y_max - y_min) * k / 5.0;
    os << "<line x1=\"" << px(tv) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(tv) << "\" y2=\""
       << mt + ph + 5 << "\"/>\n";
    os << "<text x=\"" << px(tv) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">" << fmt(tv) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
       << py(yv) << "\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333\">" << fmt(yv) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">t [s]</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\" transform=\"rotate(-90 16 "
     << mt + ph / 2 << ")\">x</text>\n";
  os << "</g>\n";

  // Minimizer rules.
  for (double v : x_star) {
    os << "<line x1=\"" << ml << "\" y1=\"" << py(v) << "\" x2=\"" << ml + pw << "\" y2=\""
       << py(v) << "\" stroke=\"#e8a020\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
  }

  // State traces, decimated for file size.
  const std::size_t max_points = 1600;
  const std::size_t stride = std::max<std::size_t>(1, traj.size() / max_points);
  for (std::size_t d = 0; d < traj.dim; ++d) {
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[d % 8]
       << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < traj.size(); i += stride) {
      os << fmt(px(traj.t[i])) << ',' << fmt(py(traj.x_at(i)[d])) << ' ';
    }
    if ((traj.size() - 1) % stride != 0) {
      const std::size_t i = traj.size() - 1;
      os << fmt(px(traj.t[i])) << ',' << fmt(py(traj.x_at(i)[d])) << ' ';
    }
    os << "\"/>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace eseek
