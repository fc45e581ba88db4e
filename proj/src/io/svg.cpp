#include "rioc/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rioc/io/csv.hpp"

namespace rioc::io {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Short tick label, deterministic.
std::string tick(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
};

Axis make_axis(const std::vector<Series>& series, bool use_x, bool log) {
  Axis ax;
  ax.log = log;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series)
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double a = log ? std::log10(v) : v;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-300) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartOptions& opts) {
  const double W = opts.width, H = opts.height;
  const double left = 70, right = 150, top = 36, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const Axis ax = make_axis(series, true, opts.log_x);
  const Axis ay = make_axis(series, false, opts.log_y);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
     << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(opts.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double xv = ax.lo + f * (ax.hi - ax.lo);
    const double yv = ay.lo + f * (ay.hi - ay.lo);
    const double px = left + f * pw, py = top + ph - f * ph;
    os << "<line x1=\"" << px << "\" y1=\"" << top << "\" x2=\"" << px << "\" y2=\"" << top + ph
       << "\" stroke=\"#eee\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py << "\" x2=\"" << left + pw << "\" y2=\""
       << py << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << (ax.log ? "1e" + tick(xv) : tick(xv)) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
       << (ay.log ? "1e" + tick(yv) : tick(yv)) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
     << escape(opts.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(opts.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const auto& x = series[s].x;
    const auto& y = series[s].y;
    // Thin long series to at most ~2000 points.
    const std::size_t stride = std::max<std::size_t>(1, x.size() / 2000);
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
      if (k % stride != 0 && k + 1 != x.size()) continue;
      if (!std::isfinite(x[k]) || !std::isfinite(y[k])) continue;
      if ((ax.log && x[k] <= 0.0) || (ay.log && y[k] <= 0.0)) continue;
      const double px = left + ax.map(x[k]) * pw;
      const double py = top + ph - ay.map(y[k]) * ph;
      os << format_double(std::round(px * 100) / 100) << ','
         << format_double(std::round(py * 100) / 100) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * s;
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape(series[s].label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rioc::io
