#include "fig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "fig/errors.hpp"

namespace fig {

namespace {

const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

constexpr double kWidth = 640, kHeight = 480;
constexpr double kMarginLeft = 55, kMarginRight = 150, kMarginTop = 20, kMarginBottom = 45;

std::string fmt(double v, const char* spec = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidData("cannot write file: " + path);
  return out;
}

struct Range {
  double lo = 0, hi = 1;
  void fit(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Range of(const std::vector<double>& vs) {
    Range r{vs.front(), vs.front()};
    for (double v : vs) r.fit(v);
    if (r.hi - r.lo < 1e-12) {
      r.lo -= 1.0;
      r.hi += 1.0;
    } else {
      const double pad = 0.05 * (r.hi - r.lo);
      r.lo -= pad;
      r.hi += pad;
    }
    return r;
  }
  double at(double v) const { return (v - lo) / (hi - lo); }
};

void open_svg(std::ofstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"#ffffff\"/>\n";
}

void draw_frame(std::ofstream& out, const Range& rx, const Range& ry, const std::string& x_label,
                const std::string& y_label) {
  const double w = kWidth - kMarginLeft - kMarginRight;
  const double h = kHeight - kMarginTop - kMarginBottom;
  out << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop) << "\" width=\"" << fmt(w)
      << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double x = kMarginLeft + f * w;
    const double y = kMarginTop + h - f * h;
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kMarginTop + h) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(kMarginTop + h + 5) << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kMarginTop + h + 18)
        << "\" text-anchor=\"middle\">" << fmt(rx.lo + f * (rx.hi - rx.lo), "%.3g") << "</text>\n";
    out << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kMarginLeft)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(ry.lo + f * (ry.hi - ry.lo), "%.3g") << "</text>\n";
  }
  out << "<text x=\"" << fmt(kMarginLeft + w / 2) << "\" y=\"" << fmt(kHeight - 8)
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt(kMarginTop + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(kMarginTop + h / 2) << ")\">" << y_label << "</text>\n";
}

void draw_legend(std::ofstream& out, const std::vector<std::pair<std::string, std::string>>& entries) {
  const double x = kWidth - kMarginRight + 15;
  double y = kMarginTop + 10;
  for (const auto& [name, color] : entries) {
    out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << fmt(x + 16) << "\" y=\"" << fmt(y) << "\">" << name << "</text>\n";
    y += 18;
  }
}

}  // namespace

void emit_scatter_svg(const std::string& path, const Embedding& emb,
                      const std::vector<std::string>& labels) {
  if (emb.r != 2 && emb.r != 3) throw InvalidConfig("scatter plot requires a 2-D or 3-D embedding");
  if (emb.Y.cols() != emb.r) throw InvalidData("embedding dimension does not match its coordinates");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != emb.Y.rows())
    throw InvalidData("label count does not match the embedding size");
  const Eigen::Index n = emb.Y.rows();

  // Project to screen coordinates; 3-D uses a fixed camera angle.
  std::vector<double> px(static_cast<std::size_t>(n)), py(static_cast<std::size_t>(n));
  if (emb.r == 2) {
    for (Eigen::Index i = 0; i < n; ++i) {
      px[static_cast<std::size_t>(i)] = emb.Y(i, 0);
      py[static_cast<std::size_t>(i)] = emb.Y(i, 1);
    }
  } else {
    const double az = 35.0 * M_PI / 180.0, el = 25.0 * M_PI / 180.0;
    const double ca = std::cos(az), sa = std::sin(az), ce = std::cos(el), se = std::sin(el);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = emb.Y(i, 0), y = emb.Y(i, 1), z = emb.Y(i, 2);
      px[static_cast<std::size_t>(i)] = -sa * x + ca * y;
      py[static_cast<std::size_t>(i)] = -se * (ca * x + sa * y) + ce * z;
    }
  }
  const Range rx = Range::of(px), ry = Range::of(py);

  std::map<std::string, std::string> color_of;
  if (!labels.empty()) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    int idx = 0;
    for (const std::string& name : distinct) color_of[name] = kPalette[idx++ % 10];
  }

  std::ofstream out = open_out(path);
  open_svg(out);
  draw_frame(out, rx, ry, "y1", "y2");
  const double w = kWidth - kMarginLeft - kMarginRight;
  const double h = kHeight - kMarginTop - kMarginBottom;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double cx = kMarginLeft + rx.at(px[static_cast<std::size_t>(i)]) * w;
    const double cy = kMarginTop + h - ry.at(py[static_cast<std::size_t>(i)]) * h;
    const std::string color =
        labels.empty() ? kPalette[0] : color_of[labels[static_cast<std::size_t>(i)]];
    out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"3\" fill=\"" << color
        << "\" fill-opacity=\"0.8\"/>\n";
  }
  std::vector<std::pair<std::string, std::string>> legend;
  for (const auto& [name, color] : color_of) legend.emplace_back(name, color);
  draw_legend(out, legend);
  out << "</svg>\n";
}

void emit_sweep_svg(const std::string& path, const std::vector<SweepSummaryRow>& summary,
                    const std::string& x_label) {
  if (summary.empty()) throw InvalidData("sweep summary is empty");

  std::vector<std::string> methods;
  for (const SweepSummaryRow& r : summary)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);

  std::vector<double> xs, ys;
  for (const SweepSummaryRow& r : summary) {
    xs.push_back(r.sigma_or_window);
    ys.push_back(r.mean_r - r.std_r);
    ys.push_back(r.mean_r + r.std_r);
  }
  const Range rx = Range::of(xs), ry = Range::of(ys);
  const double w = kWidth - kMarginLeft - kMarginRight;
  const double h = kHeight - kMarginTop - kMarginBottom;

  std::ofstream out = open_out(path);
  open_svg(out);
  draw_frame(out, rx, ry, x_label, "mean Mantel r");
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const std::string color = kPalette[m % 10];
    legend.emplace_back(methods[m], color);
    std::string points;
    for (const SweepSummaryRow& r : summary) {
      if (r.method != methods[m]) continue;
      const double cx = kMarginLeft + rx.at(r.sigma_or_window) * w;
      const double cy = kMarginTop + h - ry.at(r.mean_r) * h;
      const double lo = kMarginTop + h - ry.at(r.mean_r - r.std_r) * h;
      const double hi = kMarginTop + h - ry.at(r.mean_r + r.std_r) * h;
      points += fmt(cx) + "," + fmt(cy) + " ";
      out << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(lo) << "\" x2=\"" << fmt(cx) << "\" y2=\""
          << fmt(hi) << "\" stroke=\"" << color << "\"/>\n";
      out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    if (!points.empty()) points.pop_back();
    out << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
  }
  draw_legend(out, legend);
  out << "</svg>\n";
}

}  // namespace fig
