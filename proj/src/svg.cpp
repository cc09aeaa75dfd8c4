#include "cartanlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace cartanlab {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h) {}

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& dash = "") {
    os_ << "  <line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2)
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\"";
    if (!dash.empty()) os_ << " stroke-dasharray=\"" << dash << "\"";
    os_ << "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& stroke, const std::string& fill = "none") {
    os_ << "  <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r) << "\" stroke=\"" << stroke
        << "\" fill=\"" << fill << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    os_ << "  <polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os_ << (i ? " " : "") << fmt(pts[i].first) << "," << fmt(pts[i].second);
    os_ << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 12, const std::string& anchor = "middle") {
    os_ << "  <text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\"" << size
        << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
        << w_ << " " << h_ << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << os_.str() << "</svg>\n";
    return out.str();
  }

 private:
  int w_;
  int h_;
  std::ostringstream os_;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string sign_word(const std::vector<int>& signs) {
  std::string s;
  for (int x : signs) s += x > 0 ? '+' : '-';
  return s;
}

}  // namespace

std::string chambers_svg(const FunctionalFamily& family, const ChamberDiagram& diagram) {
  if (diagram.rank != 2) throw Error(ErrorKind::Unsupported, "chamber SVG is drawn for rank 2 only");
  Canvas c(520, 520);
  const double cx = 260, cy = 260, r = 200;
  c.circle(cx, cy, r, "#bbbbbb");
  c.line(cx - r - 20, cy, cx + r + 20, cy, "#dddddd");
  c.line(cx, cy - r - 20, cx, cy + r + 20, "#dddddd");
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Vec& k = diagram.kernel_directions[i].front();
    const std::string color = kPalette[i % std::size(kPalette)];
    c.line(cx - r * k[0], cy + r * k[1], cx + r * k[0], cy - r * k[1], color, 2.0);
    // arrow toward the positive side: the gradient direction
    const double n = family.functionals[i].norm();
    const double gx = family.functionals[i].coeffs[0] / n, gy = family.functionals[i].coeffs[1] / n;
    const double bx = cx + 0.92 * r * k[0], by = cy - 0.92 * r * k[1];
    c.line(bx, by, bx + 18 * gx, by - 18 * gy, color, 1.5);
    c.text(cx + (r + 14) * k[0], cy - (r + 14) * k[1] + 4, "ker " + family.functionals[i].label, 11);
  }
  for (const auto& ch : diagram.chambers) {
    const Vec& v = ch.representative;
    const double len = std::hypot(v[0], v[1]);
    c.text(cx + 0.62 * r * v[0] / len, cy - 0.62 * r * v[1] / len + 4, sign_word(ch.signs), 13);
  }
  c.text(cx, 24, std::to_string(diagram.chambers.size()) + " sign chambers", 14);
  return c.str();
}

std::string furstenberg_svg(const FurstenbergProfile& profile) {
  Canvas c(720, 400);
  const double x0 = 60, x1 = 690, y0 = 340, y1 = 40;
  const double lmax = std::log10(static_cast<double>(std::max<std::uint64_t>(profile.limit, 10)));
  double rmax = 1.0;
  for (double q : profile.ratios) rmax = std::max(rmax, q);
  auto px = [&](double s) { return x0 + (x1 - x0) * std::log10(s) / lmax; };
  auto py = [&](double q) { return y0 - (y0 - y1) * (q - 1.0) / (rmax - 1.0); };
  c.line(x0, y0, x1, y0, "black");
  c.line(x0, y0, x0, y1, "black");
  for (int e = 0; e <= static_cast<int>(lmax); ++e) {
    const double x = x0 + (x1 - x0) * e / lmax;
    c.line(x, y0, x, y0 + 5, "black");
    c.text(x, y0 + 18, "1e" + std::to_string(e), 10);
  }
  c.text(x0 - 8, py(rmax) + 4, fmt(rmax), 10, "end");
  c.text(x0 - 8, y0 + 4, "1", 10, "end");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < profile.ratios.size(); ++k) {
    pts.emplace_back(px(static_cast<double>(profile.products[k])), py(profile.ratios[k]));
  }
  c.polyline(pts, "#1f77b4");
  for (const auto& w : profile.windows) {
    if (w.pairs == 0) continue;
    c.line(px(w.lo), py(w.max_ratio), px(w.hi), py(w.max_ratio), "#d62728", 1.5, "4,3");
  }
  c.text((x0 + x1) / 2, 24,
         "s_{k+1}/s_k for " + std::to_string(profile.a) + "^m " + std::to_string(profile.b) + "^n (dashed: window max)", 13);
  return c.str();
}

std::string brin_katok_svg(const EntropyReport& report) {
  Canvas c(600, 400);
  const double x0 = 60, x1 = 570, y0 = 350, y1 = 40;
  double ymax = 1.0;
  std::size_t nmax = 1;
  for (const auto& e : report.radii) {
    for (double m : e.mean_counts)
      if (m > 0) ymax = std::max(ymax, std::log(m));
    nmax = std::max(nmax, e.mean_counts.size());
  }
  nmax = std::min<std::size_t>(nmax, 12);
  auto px = [&](double n) { return x0 + (x1 - x0) * (n - 1) / static_cast<double>(nmax - 1 > 0 ? nmax - 1 : 1); };
  auto py = [&](double l) { return y0 - (y0 - y1) * std::max(l, 0.0) / ymax; };
  c.line(x0, y0, x1, y0, "black");
  c.line(x0, y0, x0, y1, "black");
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    const auto& e = report.radii[i];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = 1; n <= std::min(nmax, e.mean_counts.size()); ++n) {
      if (e.mean_counts[n - 1] <= 0) break;
      pts.emplace_back(px(static_cast<double>(n)), py(std::log(e.mean_counts[n - 1])));
    }
    const std::string color = kPalette[i % std::size(kPalette)];
    c.polyline(pts, color);
    c.text(x1, y1 + 16.0 * static_cast<double>(i), "r = " + fmt(e.radius) + ", slope " + fmt(e.slope), 11, "end");
  }
  c.text((x0 + x1) / 2, 24, "log mean count vs n", 13);
  return c.str();
}

}  // namespace cartanlab
