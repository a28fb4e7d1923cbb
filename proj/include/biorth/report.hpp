// Check records, report assembly, and the machine-readable emitters:
// JSON (full report), RFC-4180 CSV (one row per check), and standalone
// SVG 1.1 line plots.  Outputs are byte-stable for a fixed config and
// platform rounding.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace biorth {

struct CheckRecord {
  std::string id;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;  // free-form witness / context
};

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Report {
  std::string prop;
  std::vector<CheckRecord> checks;
  std::vector<PlotSeries> plots;
  nlohmann::ordered_json config_echo;
  nlohmann::ordered_json environment;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  CheckRecord& add(const std::string& id, double value, double tol, bool pass,
                   std::string note = {}) {
    checks.push_back({id, value, tol, pass, std::move(note)});
    return checks.back();
  }
};

inline nlohmann::ordered_json environment_metadata() {
  nlohmann::ordered_json env;
  env["compiler"] = __VERSION__;
#ifdef NDEBUG
  env["build"] = "release";
#else
  env["build"] = "debug";
#endif
  env["float"] = "ieee754-binary64";
  return env;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180 quoting: wrap when the field holds a comma, quote, or newline.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["prop"] = r.prop;
  j["pass"] = r.all_pass();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["value"] = c.value;
    jc["tol"] = c.tol;
    jc["pass"] = c.pass;
    if (!c.note.empty()) jc["witness"] = c.note;
    arr.push_back(jc);
  }
  j["checks"] = arr;
  j["environment"] = r.environment;
  j["config"] = r.config_echo;
  return j;
}

inline void write_report_json(const Report& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << report_to_json(r).dump(2) << "\n";
}

inline void write_report_csv(const Report& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "id,value,tol,pass\r\n";
  for (const auto& c : r.checks)
    out << detail::csv_field(c.id) << ',' << detail::format_double(c.value) << ','
        << detail::format_double(c.tol) << ',' << (c.pass ? "true" : "false") << "\r\n";
}

// Minimal standalone SVG 1.1 line plot, one polyline per series.
inline void write_svg_lines(const std::vector<PlotSeries>& series, const std::string& title,
                            const std::filesystem::path& path) {
  const int w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-300) xmax = xmin + 1;
  if (ymax - ymin < 1e-300) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b"};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
      << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4, yv = ymin + k * (ymax - ymin) / 4;
    out << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::format_double(
               std::round(xv * 1e6) / 1e6) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << detail::format_double(
               std::round(yv * 1e6) / 1e6) << "</text>\n";
  }
  int ci = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6] << "\" stroke-width=\"1.5\""
        << " points=\"";
    for (const auto& [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << w - mr - 8 << "\" y=\"" << mt + 16 + 16 * ci
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[ci % 6] << "\">"
        << s.name << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

// Write the full artifact set for one report.
inline void report_emit(const Report& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_report_json(r, out_dir / (r.prop + ".json"));
  write_report_csv(r, out_dir / (r.prop + ".csv"));
  if (!r.plots.empty())
    write_svg_lines(r.plots, r.prop, out_dir / (r.prop + ".svg"));
}

}  // namespace biorth
