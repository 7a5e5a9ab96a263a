// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/charts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"

namespace casesift::charts {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* colour(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::string esc(std::string_view s) {
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

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::string px(double v) {
  std::ostringstream out;
  out << std::fixed;
  out.precision(2);
  out << v;
  return out.str();
}

class Svg {
 public:
  Svg(const Frame& f, const std::string& title) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(f.width) << "\" height=\"" << px(f.height)
         << "\" viewBox=\"0 0 " << px(f.width) << ' ' << px(f.height) << "\" font-family=\"sans-serif\">\n";
    out_ << "<title>" << esc(title) << "</title>\n";
    out_ << "<text class=\"title\" x=\"" << px(f.width / 2) << "\" y=\"" << px(f.margin_top * 0.6)
         << "\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
  }

  std::ostringstream& raw() { return out_; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

void axes(Svg& svg, const Scale& s, int ticks = 5) {
  const auto& f = s.frame;
  const double left = f.margin_left;
  const double right = f.width - f.margin_right;
  const double top = f.margin_top;
  const double bottom = f.height - f.margin_bottom;
  auto& o = svg.raw();
  o << "<g class=\"axes\" stroke=\"#333\" fill=\"none\">\n";
  o << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right) << "\" y2=\"" << px(bottom)
    << "\"/>\n";
  o << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left) << "\" y2=\"" << px(bottom)
    << "\"/>\n";
  o << "</g>\n<g class=\"ticks\" font-size=\"10\" fill=\"#333\">\n";
  for (int i = 0; i <= ticks; ++i) {
    const double yv = s.y_min + (s.y_max - s.y_min) * i / ticks;
    o << "<text x=\"" << px(left - 5) << "\" y=\"" << px(s.y(yv) + 3) << "\" text-anchor=\"end\">" << fmt(yv)
      << "</text>\n";
    const double xv = s.x_min + (s.x_max - s.x_min) * i / ticks;
    o << "<text x=\"" << px(s.x(xv)) << "\" y=\"" << px(bottom + 15) << "\" text-anchor=\"middle\">" << fmt(xv)
      << "</text>\n";
  }
  o << "</g>\n";
}

void polyline(Svg& svg, const Scale& s, std::span<const std::pair<double, double>> pts, const char* stroke,
              const char* cls = "series") {
  auto& o = svg.raw();
  o << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) o << ' ';
    o << px(s.x(pts[i].first)) << ',' << px(s.y(pts[i].second));
  }
  o << "\"/>\n";
}

void mark(Svg& svg, double x, double y, const char* fill, double r = 3) {
  svg.raw() << "<circle class=\"mark\" cx=\"" << px(x) << "\" cy=\"" << px(y) << "\" r=\"" << px(r) << "\" fill=\""
            << fill << "\"/>\n";
}

void legend(Svg& svg, const Frame& f, const std::vector<std::string>& names) {
  auto& o = svg.raw();
  o << "<g class=\"legend\" font-size=\"10\">\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = f.margin_top + 12.0 * static_cast<double>(i);
    const double x = f.width - f.margin_right - 150;
    o << "<rect x=\"" << px(x) << "\" y=\"" << px(y - 8) << "\" width=\"8\" height=\"8\" fill=\"" << colour(i)
      << "\"/>\n";
    o << "<text x=\"" << px(x + 12) << "\" y=\"" << px(y) << "\">" << esc(names[i]) << "</text>\n";
  }
  o << "</g>\n";
}

}  // namespace

double Scale::x(double v) const {
  const double w = frame.width - frame.margin_left - frame.margin_right;
  return frame.margin_left + (v - x_min) / (x_max - x_min) * w;
}

double Scale::y(double v) const {
  const double h = frame.height - frame.margin_top - frame.margin_bottom;
  return frame.height - frame.margin_bottom - (v - y_min) / (y_max - y_min) * h;
}

Scale fit_scale(std::span<const std::pair<double, double>> points, const Frame& frame) {
  Scale s;
  s.frame = frame;
  if (points.empty()) return s;
  s.x_min = s.x_max = points.front().first;
  s.y_min = s.y_max = 0;
  for (const auto& [x, y] : points) {
    s.x_min = std::min(s.x_min, x);
    s.x_max = std::max(s.x_max, x);
    s.y_min = std::min(s.y_min, y);
    s.y_max = std::max(s.y_max, y);
  }
  if (s.x_min == s.x_max) {
    s.x_min -= 1;
    s.x_max += 1;
  }
  if (s.y_min == s.y_max) {
    s.y_min -= 1;
    s.y_max += 1;
  }
  return s;
}

std::string line_chart(const std::string& title, std::span<const Series> series, const Frame& frame) {
  std::vector<std::pair<double, double>> all;
  for (const auto& s : series) all.insert(all.end(), s.points.begin(), s.points.end());
  const auto scale = fit_scale(all, frame);
  Svg svg(frame, title);
  axes(svg, scale);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    polyline(svg, scale, series[i].points, colour(i));
    for (const auto& [x, y] : series[i].points) mark(svg, scale.x(x), scale.y(y), colour(i));
    names.push_back(series[i].name);
  }
  if (series.size() > 1) legend(svg, frame, names);
  return svg.finish();
}

std::string bar_chart(const std::string& title, std::span<const std::pair<std::string, double>> bars,
                      const Frame& frame) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < bars.size(); ++i) pts.emplace_back(static_cast<double>(i), bars[i].second);
  auto scale = fit_scale(pts, frame);
  scale.x_min = -0.5;
  scale.x_max = static_cast<double>(std::max<std::size_t>(bars.size(), 1)) - 0.5;
  Svg svg(frame, title);
  axes(svg, scale, 5);
  auto& o = svg.raw();
  const double slot = (scale.x(1) - scale.x(0)) * 0.8;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double cx = scale.x(static_cast<double>(i));
    const double top = scale.y(std::max(bars[i].second, 0.0));
    const double base = scale.y(std::min(bars[i].second, 0.0));
    o << "<rect class=\"bar\" x=\"" << px(cx - slot / 2) << "\" y=\"" << px(top) << "\" width=\"" << px(slot)
      << "\" height=\"" << px(base - top) << "\" fill=\"" << colour(0) << "\"><title>" << esc(bars[i].first) << ": "
      << fmt(bars[i].second) << "</title></rect>\n";
    o << "<text class=\"label\" font-size=\"8\" transform=\"translate(" << px(cx) << ','
      << px(frame.height - frame.margin_bottom + 25) << ") rotate(30)\">" << esc(bars[i].first) << "</text>\n";
  }
  return svg.finish();
}

std::string regression_chart(const std::string& title, std::span<const std::pair<double, double>> points,
                             const analytics::RegressionResult& fit, const Frame& frame) {
  auto scale = fit_scale(points, frame);
  std::vector<std::pair<double, double>> line{{scale.x_min, fit.intercept + fit.slope * scale.x_min},
                                              {scale.x_max, fit.intercept + fit.slope * scale.x_max}};
  // Widen the y range so the fitted line stays inside the frame.
  for (const auto& [x, y] : line) {
    scale.y_min = std::min(scale.y_min, y);
    scale.y_max = std::max(scale.y_max, y);
  }
  Svg svg(frame, title);
  axes(svg, scale);
  for (const auto& [x, y] : points) mark(svg, scale.x(x), scale.y(y), colour(0));
  polyline(svg, scale, line, colour(3), "fit");
  std::ostringstream caption;
  caption << "y = " << fmt(fit.slope) << "x + " << fmt(fit.intercept) << ", r2 = " << fmt(fit.r_squared);
  if (fit.p_value) caption << ", p = " << fmt(*fit.p_value);
  svg.raw() << "<text class=\"caption\" x=\"" << px(frame.margin_left + 5) << "\" y=\"" << px(frame.margin_top + 12)
            << "\" font-size=\"10\">" << esc(caption.str()) << "</text>\n";
  return svg.finish();
}

std::string cluster_chart(const std::string& title, std::span<const double> values,
                          const analytics::ClusteringResult& clustering, const Frame& frame) {
  if (clustering.assignment.size() != values.size()) {
    throw ArgumentError("cluster assignment does not match the values");
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < values.size(); ++i) pts.emplace_back(static_cast<double>(i), values[i]);
  const auto scale = fit_scale(pts, frame);
  Svg svg(frame, title);
  axes(svg, scale);
  for (std::size_t i = 0; i < values.size(); ++i) {
    mark(svg, scale.x(pts[i].first), scale.y(pts[i].second), colour(clustering.assignment[i]), 2);
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < clustering.clusters.size(); ++j) {
    const auto& c = clustering.clusters[j];
    names.push_back("cluster " + std::to_string(j) + ": n=" + std::to_string(c.count) + ", mean " + fmt(c.centroid));
  }
  legend(svg, frame, names);
  return svg.finish();
}

namespace {

std::vector<csv::Row> read_table(const std::filesystem::path& path, std::size_t columns) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError(path.string() + ": missing header");
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.size() < columns) throw SchemaError(path.string() + ": short row");
  }
  return rows;
}

double to_num(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(path.string() + ": not a number: '" + s + "'");
  }
}

}  // namespace

std::vector<std::filesystem::path> emit_charts(const std::filesystem::path& analysis_dir,
                                               const std::filesystem::path& out_dir) {
  if (!std::filesystem::is_directory(analysis_dir)) throw IoError("no analysis directory at " + analysis_dir.string());
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& svg) {
    io::write_file(out_dir / name, svg);
    written.push_back(out_dir / name);
  };

  const auto year_path = analysis_dir / "by_year.csv";
  std::vector<std::pair<double, double>> by_year;
  for (const auto& r : read_table(year_path, 2)) by_year.emplace_back(to_num(r[0], year_path), to_num(r[1], year_path));
  const auto reg_path = analysis_dir / "regression.json";
  const auto reg = nlohmann::json::parse(io::read_file(reg_path));
  if (!reg.is_null()) {
    analytics::RegressionResult fit;
    fit.slope = reg.at("slope").get<double>();
    fit.intercept = reg.at("intercept").get<double>();
    fit.r_squared = reg.at("r_squared").get<double>();
    if (!reg.at("p_value").is_null()) fit.p_value = reg.at("p_value").get<double>();
    emit("cases_by_year.svg", regression_chart("Cases per year", by_year, fit));
  } else {
    std::vector<Series> s{{"cases", by_year}};
    emit("cases_by_year.svg", line_chart("Cases per year", s));
  }

  const auto court_path = analysis_dir / "by_court.csv";
  std::vector<std::pair<std::string, double>> courts;
  for (const auto& r : read_table(court_path, 2)) courts.emplace_back(r[0], to_num(r[1], court_path));
  emit("cases_by_court.svg", bar_chart("Cases per court", courts));

  const auto tier_path = analysis_dir / "by_tier.csv";
  std::vector<Series> tiers;
  std::map<std::string, std::size_t> tier_index;
  for (const auto& r : read_table(tier_path, 3)) {
    auto [it, fresh] = tier_index.emplace(r[0], tiers.size());
    if (fresh) tiers.push_back({r[0], {}});
    tiers[it->second].points.emplace_back(to_num(r[1], tier_path), to_num(r[2], tier_path));
  }
  emit("cases_by_tier.svg", line_chart("Cases per court tier and year", tiers));

  const auto cluster_path = analysis_dir / "clusters.csv";
  const auto cluster_rows = read_table(cluster_path, 3);
  if (!cluster_rows.empty()) {
    analytics::ClusteringResult c;
    std::vector<double> values;
    for (const auto& r : cluster_rows) {
      values.push_back(to_num(r[1], cluster_path));
      const auto j = static_cast<std::size_t>(to_num(r[2], cluster_path));
      c.assignment.push_back(j);
      if (j >= c.clusters.size()) c.clusters.resize(j + 1);
      c.clusters[j].centroid += values.back();
      ++c.clusters[j].count;
    }
    for (auto& cl : c.clusters) {
      if (cl.count) cl.centroid /= static_cast<double>(cl.count);
    }
    c.k = c.clusters.size();
    emit("word_count_clusters.svg", cluster_chart("Word count clusters", values, c));
  }
  return written;
}

}  // namespace casesift::charts
