#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "minfo/experiment.hpp"

namespace minfo {

namespace {

using nlohmann::json;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double nice_step(double range, int target_ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;  // (x, y), NaN already removed
};

}  // namespace

void render_plot(const std::vector<ResultRow>& rows, const json& plot_cfg,
                 const std::string& svg_path, std::vector<std::string>* warnings) {
  if (rows.empty()) throw std::invalid_argument("render_plot: no rows");
  for (const auto& r : rows) {
    if (r.preset != rows.front().preset) {
      throw std::invalid_argument("render_plot: rows mix presets");
    }
  }

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  // series per estimator label, sorted for deterministic colors
  std::map<std::string, Series> series;
  for (const auto& r : rows) {
    Series& s = series[r.estimator];
    s.label = r.estimator;
    if (std::isnan(r.mi_bits)) {
      warn("omitting point " + tick_label(r.point) + " for " + r.estimator + " (NaN estimate)");
      continue;
    }
    s.pts.emplace_back(r.point, r.mi_bits);
  }

  // reference curves from per-point row values
  struct Ref {
    std::string label;
    std::string dash;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Ref> refs;
  if (plot_cfg.contains("references")) {
    std::map<double, const ResultRow*> by_point;
    for (const auto& r : rows) {
      if (!by_point.count(r.point)) by_point[r.point] = &r;
    }
    int ref_idx = 0;
    for (const auto& rc : plot_cfg.at("references")) {
      Ref ref;
      const std::string column = rc.value("column", "capacity_bits");
      const double scale = rc.value("scale", 1.0);
      ref.label = rc.value("label", column);
      ref.dash = ref_idx % 2 == 0 ? "6,4" : "2,3";
      for (const auto& [x, row] : by_point) {
        const double v = column == "capacity_bits" ? row->capacity_bits
                       : column == "half_gaussian_bits" ? row->half_gaussian_bits
                       : std::numeric_limits<double>::quiet_NaN();
        if (std::isnan(v)) continue;
        ref.pts.emplace_back(x, scale * v);
      }
      refs.push_back(std::move(ref));
      ++ref_idx;
    }
  }

  bool any_points = false;
  for (const auto& [_, s] : series) any_points |= !s.pts.empty();
  if (!any_points) throw std::invalid_argument("render_plot: every point is NaN");

  // ranges
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  auto grow = [&](double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const auto& [_, s] : series) {
    for (auto [x, y] : s.pts) grow(x, y);
  }
  for (const auto& ref : refs) {
    for (auto [x, y] : ref.pts) grow(x, y);
  }
  if (x_min == x_max) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  y_min = plot_cfg.value("y_min", y_min - 0.05 * (y_max - y_min) - 1e-9);
  y_max = plot_cfg.value("y_max", y_max + 0.05 * (y_max - y_min) + 1e-9);

  const double width = plot_cfg.value("width", 800.0);
  const double height = plot_cfg.value("height", 560.0);
  const double ml = 64, mr = 24, mt = 46, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::string title = plot_cfg.value("title", rows.front().preset);
  svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" font-family=\"sans-serif\" "
      << "font-size=\"15\" text-anchor=\"middle\">" << title << "</text>\n";

  // gridlines + ticks
  const double xstep = nice_step(x_max - x_min, 8);
  const double ystep = nice_step(y_max - y_min, 6);
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double x = std::ceil(x_min / xstep) * xstep; x <= x_max + 1e-9 * xstep; x += xstep) {
    svg << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(sx(x))
        << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#e5e5e5\"/>\n";
    svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(mt + ph + 16)
        << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  for (double y = std::ceil(y_min / ystep) * ystep; y <= y_max + 1e-9 * ystep; y += ystep) {
    svg << "<line x1=\"" << num(ml) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(sy(y)) << "\" stroke=\"#e5e5e5\"/>\n";
    svg << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(y) + 4)
        << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
  }
  svg << "</g>\n";

  // optional top axis: SNR in dB recovered from the capacity reference
  if (plot_cfg.value("top_axis", "") == std::string("snr_db")) {
    std::map<double, double> snr_by_point;
    for (const auto& r : rows) {
      if (!snr_by_point.count(r.point) && !std::isnan(r.capacity_bits)) {
        const double snr = std::pow(2.0, r.capacity_bits) - 1.0;
        if (snr > 0) snr_by_point[r.point] = 10.0 * std::log10(snr);
      }
    }
    svg << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\">\n";
    int count = 0;
    for (const auto& [x, snr_db] : snr_by_point) {
      if (count++ % 5 != 0) continue;
      svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(mt - 6)
          << "\" text-anchor=\"middle\">" << tick_label(std::round(snr_db * 10) / 10)
          << "</text>\n";
    }
    svg << "<text x=\"" << num(ml + pw) << "\" y=\"" << num(mt - 6)
        << "\" text-anchor=\"start\" font-style=\"italic\"> SNR dB</text>\n";
    svg << "</g>\n";
  }

  // frame
  svg << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // axis labels
  const std::string x_label = plot_cfg.value("x_label", "operating point");
  const std::string y_label = plot_cfg.value("y_label", "Mutual information [bits]");
  svg << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 12)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << num(mt + ph / 2) << ")\">" << y_label << "</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      const std::string& dash) {
    if (pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
      if (!dash.empty()) svg << " stroke-dasharray=\"" << dash << "\"";
      svg << " points=\"";
      for (auto [x, y] : pts) svg << num(sx(x)) << "," << num(sy(y)) << " ";
      svg << "\"/>\n";
    }
  };

  for (const auto& ref : refs) polyline(ref.pts, "#808080", ref.dash);

  int color_idx = 0;
  for (const auto& [_, s] : series) {
    const std::string color = kPalette[color_idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    polyline(s.pts, color, "");
    for (auto [x, y] : s.pts) {
      svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
          << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
    }
    ++color_idx;
  }

  // legend
  double ly = mt + 12;
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  color_idx = 0;
  for (const auto& [_, s] : series) {
    const std::string color = kPalette[color_idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<line x1=\"" << num(ml + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(ml + 34)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(ml + 40) << "\" y=\"" << num(ly + 4) << "\">" << s.label
        << "</text>\n";
    ly += 16;
    ++color_idx;
  }
  for (const auto& ref : refs) {
    svg << "<line x1=\"" << num(ml + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(ml + 34)
        << "\" y2=\"" << num(ly) << "\" stroke=\"#808080\" stroke-width=\"2\" "
        << "stroke-dasharray=\"" << ref.dash << "\"/>\n";
    svg << "<text x=\"" << num(ml + 40) << "\" y=\"" << num(ly + 4) << "\">" << ref.label
        << "</text>\n";
    ly += 16;
  }
  svg << "</g>\n</svg>\n";

  namespace fs = std::filesystem;
  const fs::path target(svg_path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) throw std::runtime_error("cannot write " + tmp.string());
    out << svg.str();
  }
  fs::rename(tmp, target);
}

}  // namespace minfo
