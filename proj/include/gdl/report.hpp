#pragma once

// Report records (one JSON object per line) and SVG plots with CSV sidecars.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gdl/common.hpp"

namespace gdl {

inline constexpr const char* kReportSchema = "gdl.report/1";

// 64-bit FNV-1a
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Flat record of named numbers and strings plus provenance. Field order is
// insertion order, so identical runs serialize identically.
class ReportRecord {
 public:
  using Value = std::variant<double, std::int64_t, std::string, bool>;

  ReportRecord(std::string command, std::string config_hash, std::uint64_t seed)
      : command_(std::move(command)), config_hash_(std::move(config_hash)), seed_(seed) {}

  ReportRecord& set(const std::string& key, double v) { return put(key, v); }
  ReportRecord& set(const std::string& key, int v) { return put(key, static_cast<std::int64_t>(v)); }
  ReportRecord& set(const std::string& key, std::int64_t v) { return put(key, v); }
  ReportRecord& set(const std::string& key, std::size_t v) { return put(key, static_cast<std::int64_t>(v)); }
  ReportRecord& set(const std::string& key, bool v) { return put(key, v); }
  ReportRecord& set(const std::string& key, const char* v) { return put(key, std::string(v)); }
  ReportRecord& set(const std::string& key, std::string v) { return put(key, std::move(v)); }

  void set_wall_ms(double ms) { wall_ms_ = ms; }

  const std::string& command() const { return command_; }
  const std::string& config_hash() const { return config_hash_; }
  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

  const Value& at(const std::string& key) const {
    for (const auto& [k, v] : fields_)
      if (k == key) return v;
    throw PreconditionError("report has no field '" + key + "'");
  }
  double number(const std::string& key) const {
    const auto& v = at(key);
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw PreconditionError("report field '" + key + "' is not numeric");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = command_;
    j["config_hash"] = config_hash_;
    j["seed"] = seed_;
    for (const auto& [k, v] : fields_) std::visit([&, key = k](const auto& x) { j[key] = x; }, v);
    j["wall_ms"] = wall_ms_;
    return j;
  }

  std::string to_line() const { return to_json().dump(); }

 private:
  ReportRecord& put(const std::string& key, Value v) {
    if (key == "schema" || key == "command" || key == "config_hash" || key == "seed" || key == "wall_ms")
      throw PreconditionError("report field name '" + key + "' is reserved");
    if (auto d = std::get_if<double>(&v); d && !std::isfinite(*d)) v = std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf");
    for (auto& [k, old] : fields_)
      if (k == key) {
        old = std::move(v);
        return *this;
      }
    fields_.emplace_back(key, std::move(v));
    return *this;
  }

  std::string command_;
  std::string config_hash_;
  std::uint64_t seed_ = 0;
  double wall_ms_ = 0.0;
  std::vector<std::pair<std::string, Value>> fields_;
};

// Collects records and writes them in insertion order.
class ReportWriter {
 public:
  explicit ReportWriter(std::ostream& os) : os_(os) {}
  void write(const ReportRecord& r) { os_ << r.to_line() << '\n'; }

 private:
  std::ostream& os_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Plots

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers_only = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<Series> series;
  bool log_y = false;
  bool equal_aspect = false;
};

namespace detail {

inline std::string fmt(double v, const char* f = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
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

// Roughly five round tick values covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  return colors[i % 6];
}

}  // namespace detail

// Writes `path` (SVG) and `path + ".csv"` (series,x,y with round-trip
// precision). Output bytes depend only on the input.
inline void emit_plot(const PlotSpec& spec, const std::string& path) {
  if (spec.series.empty()) throw PreconditionError("plot needs at least one series");
  double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw DimensionError("series '" + s.label + "' has mismatched x/y lengths");
    if (s.x.empty()) throw PreconditionError("series '" + s.label + "' is empty");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (spec.log_y) {
        if (!(y > 0.0)) throw PreconditionError("log-scale plot needs positive values");
        y = std::log10(y);
      }
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) throw PreconditionError("plot values must be finite");
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  auto pad = [](double& lo, double& hi) {
    if (hi - lo < 1e-12) {
      const double d = std::max(1.0, std::abs(lo)) * 0.5;
      lo -= d;
      hi += d;
    } else {
      const double d = 0.05 * (hi - lo);
      lo -= d;
      hi += d;
    }
  };
  pad(xlo, xhi);
  pad(ylo, yhi);

  const double W = 640, H = spec.equal_aspect ? 640 : 440, ml = 70, mr = 150, mt = 40, mb = 55;
  double pw = W - ml - mr, ph = H - mt - mb;
  if (spec.equal_aspect) {
    const double sx = pw / (xhi - xlo), sy = ph / (yhi - ylo), s = std::min(sx, sy);
    const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
    xlo = cx - 0.5 * pw / s;
    xhi = cx + 0.5 * pw / s;
    ylo = cy - 0.5 * ph / s;
    yhi = cy + 0.5 * ph / s;
  }
  auto X = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  auto Y = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };
  using detail::fmt;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << detail::xml_escape(spec.title) << "</text>\n";
  svg << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : detail::ticks(xlo, xhi)) {
    svg << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(X(t)) << "\" y2=\""
        << fmt(mt + ph + 5) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(mt + ph + 18) << "\" text-anchor=\"middle\">"
        << fmt(t, "%g") << "</text>\n";
  }
  for (double t : detail::ticks(ylo, yhi)) {
    svg << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\"" << fmt(ml) << "\" y2=\""
        << fmt(Y(t)) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(Y(t) + 4) << "\" text-anchor=\"end\">"
        << (spec.log_y ? "1e" + fmt(t, "%g") : fmt(t, "%g")) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(H - 12) << "\" text-anchor=\"middle\">"
      << detail::xml_escape(spec.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << fmt(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::xml_escape(spec.y_label) << (spec.log_y ? " (log10)" : "") << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = detail::palette(k);
    auto yv = [&](std::size_t i) { return spec.log_y ? std::log10(s.y[i]) : s.y[i]; };
    if (!s.markers_only && s.x.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) svg << (i ? " " : "") << fmt(X(s.x[i])) << ',' << fmt(Y(yv(i)));
      svg << "\"/>\n";
    }
    const double r = s.markers_only ? 1.2 : 3.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      svg << "<circle cx=\"" << fmt(X(s.x[i])) << "\" cy=\"" << fmt(Y(yv(i))) << "\" r=\"" << r << "\" fill=\""
          << color << "\"/>\n";
    const double ly = mt + 14 + 18.0 * k;
    svg << "<circle cx=\"" << fmt(ml + pw + 14) << "\" cy=\"" << fmt(ly - 4) << "\" r=\"4\" fill=\"" << color
        << "\"/><text x=\"" << fmt(ml + pw + 24) << "\" y=\"" << fmt(ly) << "\">" << detail::xml_escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot open plot file '" + path + "'");
  out << svg.str();
  std::ofstream csv(path + ".csv", std::ios::binary);
  if (!csv) throw PreconditionError("cannot open sidecar file '" + path + ".csv'");
  csv << "series,x,y\n";
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      csv << s.label << ',' << fmt(s.x[i], "%.17g") << ',' << fmt(s.y[i], "%.17g") << '\n';
}

}  // namespace gdl
