#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "qe/serialization.hpp"

namespace qe {

namespace {

constexpr double kWidth = 720;
constexpr double kPanelHeight = 260;
constexpr double kMargin = 56;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Panel {
  double top;
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    return top + kPanelHeight - (y - y_lo) / (y_hi - y_lo) * kPanelHeight;
  }
};

void frame(std::ostream& out, const Panel& p, const std::string& title) {
  out << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(p.top) << "\" width=\""
      << fmt(kWidth - 2 * kMargin) << "\" height=\"" << fmt(kPanelHeight)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << fmt(kMargin) << "\" y=\"" << fmt(p.top - 8) << "\">" << title
      << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = p.y_lo + (p.y_hi - p.y_lo) * k / 4.0;
    out << "<text x=\"" << fmt(kMargin - 6) << "\" y=\"" << fmt(p.py(y) + 4)
        << "\" text-anchor=\"end\">" << label(y) << "</text>\n";
    const double x = p.x_lo + (p.x_hi - p.x_lo) * k / 4.0;
    out << "<text x=\"" << fmt(p.px(x)) << "\" y=\"" << fmt(p.top + kPanelHeight + 16)
        << "\" text-anchor=\"middle\">" << label(x) << "</text>\n";
  }
}

template <class Y>
void polyline(std::ostream& out, const Panel& p, const std::vector<double>& xs, Y&& y,
              const char* colour) {
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double v = y(k);
    if (!std::isfinite(v)) continue;
    out << (first ? "" : " ") << fmt(p.px(xs[k])) << ',' << fmt(p.py(v));
    first = false;
  }
  out << "\"/>\n";
}

void legend(std::ostream& out, const Panel& p, std::size_t index, const std::string& text,
            const char* colour) {
  const double x = kWidth - kMargin - 110;
  const double y = p.top + 16 + 16 * static_cast<double>(index);
  out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y - 4) << "\" x2=\"" << fmt(x + 20)
      << "\" y2=\"" << fmt(y - 4) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << fmt(x + 26) << "\" y=\"" << fmt(y) << "\">" << text << "</text>\n";
}

}  // namespace

void write_profile_svg(std::ostream& out, const std::vector<ProfileRow>& rows,
                       const ResidualReport& residuals) {
  const double height = 2 * kPanelHeight + 3 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
      << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<double> s;
  double y_max = 0.0;
  for (const auto& r : rows) {
    s.push_back(r.s);
    y_max = std::max(y_max, r.alpha);
    for (double b : r.beta) y_max = std::max(y_max, b);
  }
  const std::size_t rank = rows.empty() ? 0 : rows.front().beta.size();
  const double s_hi = s.empty() ? 1.0 : std::max(s.back(), 1e-300);

  const Panel top{kMargin, 0.0, s_hi, 0.0, y_max > 0 ? 1.05 * y_max : 1.0};
  frame(out, top, "alpha and beta_i against s");
  polyline(out, top, s, [&](std::size_t k) { return rows[k].alpha; }, kPalette[0]);
  legend(out, top, 0, "alpha", kPalette[0]);
  for (std::size_t i = 0; i < rank; ++i) {
    const char* colour = kPalette[(i + 1) % std::size(kPalette)];
    polyline(out, top, s, [&](std::size_t k) { return rows[k].beta[i]; }, colour);
    legend(out, top, i + 1, "beta_" + std::to_string(i + 1), colour);
  }

  // Largest residual per grid point, floored so exact zeros stay plottable.
  const auto& g = residuals.grid;
  std::vector<double> worst(g.size(), std::numeric_limits<double>::quiet_NaN());
  double lo = 0.0, hi = -20.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double w = std::max(std::abs(residuals.res_fiber[k]), std::abs(residuals.res_fiber_twist[k]));
    for (double r : residuals.res_base[k]) w = std::max(w, std::abs(r));
    if (!std::isfinite(w)) continue;
    worst[k] = std::log10(std::max(w, 1e-20));
    lo = std::min(lo, worst[k]);
    hi = std::max(hi, worst[k]);
  }
  lo = std::min(lo, -20.0);
  hi = std::max(hi + 1.0, lo + 1.0);
  const Panel bottom{2 * kMargin + kPanelHeight, 0.0, g.empty() ? s_hi : std::max(g.back(), s_hi),
                     std::floor(lo), std::ceil(hi)};
  frame(out, bottom, "log10 max residual against s");
  polyline(out, bottom, g, [&](std::size_t k) { return worst[k]; }, kPalette[1]);
  out << "</svg>\n";
}

}  // namespace qe
