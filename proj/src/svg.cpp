#include "mfrp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mfrp/csv.hpp"
#include "mfrp/errors.hpp"

namespace mfrp {

namespace {

const char* kPalette[] = {"#1f66ad", "#d1495b", "#3f8f4a", "#8458b3",
                          "#c97b2d", "#4ab3b0", "#7a6c5d", "#ad1f8e"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  std::vector<double> ticks;
};

double tx(double v, const Axis& a) { return a.log ? std::log10(v) : v; }

void nice_ticks(Axis& a) {
  a.ticks.clear();
  if (a.log) {
    const int e_lo = static_cast<int>(std::floor(std::log10(a.lo) + 1e-12));
    const int e_hi = static_cast<int>(std::ceil(std::log10(a.hi) - 1e-12));
    for (int e = e_lo; e <= e_hi; ++e) {
      const double t = std::pow(10.0, e);
      if (t >= a.lo * (1 - 1e-12) && t <= a.hi * (1 + 1e-12))
        a.ticks.push_back(t);
    }
    if (a.ticks.size() < 2) {
      a.ticks = {a.lo, a.hi};
    }
    return;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const double first = std::ceil(a.lo / step) * step;
  for (double t = first; t <= a.hi + step * 1e-9; t += step)
    a.ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
}

}  // namespace

std::string render_svg_plot(const PlotSpec& spec,
                            const std::vector<PlotSeries>& series) {
  const double ml = 72, mr = 24, mt = 40, mb = 56;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;

  Axis ax, ay;
  ax.log = spec.log_x;
  ay.log = spec.log_y;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0)) continue;
      if (spec.log_y && !(s.y[i] > 0)) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      double dn = s.y[i], up = s.y[i];
      if (!s.yerr.empty()) {
        dn -= s.yerr[i];
        up += s.yerr[i];
        if (spec.log_y && !(dn > 0)) dn = s.y[i];
      }
      y_lo = std::min(y_lo, dn);
      y_hi = std::max(y_hi, up);
    }
  }
  if (!(x_lo < x_hi)) {
    x_hi = x_lo + 1;
    x_lo -= 1;
  }
  if (!(y_lo < y_hi)) {
    y_hi = y_lo + 1;
    y_lo -= 1;
  }
  if (!spec.log_x) {
    const double pad = 0.03 * (x_hi - x_lo);
    x_lo -= pad;
    x_hi += pad;
  }
  if (!spec.log_y) {
    const double pad = 0.06 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
  }
  ax.lo = x_lo;
  ax.hi = x_hi;
  ay.lo = y_lo;
  ay.hi = y_hi;
  nice_ticks(ax);
  nice_ticks(ay);

  const double txa = tx(ax.lo, ax), txb = tx(ax.hi, ax);
  const double tya = tx(ay.lo, ay), tyb = tx(ay.hi, ay);
  auto px = [&](double v) { return ml + (tx(v, ax) - txa) / (txb - txa) * pw; };
  auto py = [&](double v) {
    return mt + ph - (tx(v, ay) - tya) / (tyb - tya) * ph;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
    << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
    << " " << spec.height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"15\">"
    << spec.title << "</text>\n";

  // frame and grid
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#404040\"/>\n";
  for (double t : ax.ticks) {
    const double X = px(t);
    o << "<line x1=\"" << fmt(X) << "\" y1=\"" << mt + ph << "\" x2=\""
      << fmt(X) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#404040\"/>\n";
    o << "<line x1=\"" << fmt(X) << "\" y1=\"" << mt << "\" x2=\"" << fmt(X)
      << "\" y2=\"" << mt + ph << "\" stroke=\"#e4e4e4\"/>\n";
    o << "<text x=\"" << fmt(X) << "\" y=\"" << mt + ph + 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks) {
    const double Y = py(t);
    o << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(Y) << "\" x2=\"" << ml
      << "\" y2=\"" << fmt(Y) << "\" stroke=\"#404040\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << fmt(Y) << "\" x2=\"" << ml + pw
      << "\" y2=\"" << fmt(Y) << "\" stroke=\"#e4e4e4\"/>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(Y + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(t) << "</text>\n";
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"13\">"
    << spec.x_label << "</text>\n";
  o << "<text x=\"18\" y=\"" << mt + ph / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 18 "
    << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0)) continue;
      if (spec.log_y && !(s.y[i] > 0)) continue;
      pts << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
      if (!s.yerr.empty() && s.yerr[i] > 0.0) {
        double dn = s.y[i] - s.yerr[i];
        const double up = s.y[i] + s.yerr[i];
        if (spec.log_y && !(dn > 0)) dn = s.y[i];
        o << "<line x1=\"" << fmt(px(s.x[i])) << "\" y1=\"" << fmt(py(dn))
          << "\" x2=\"" << fmt(px(s.x[i])) << "\" y2=\"" << fmt(py(up))
          << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
      }
    }
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0)) continue;
      if (spec.log_y && !(s.y[i] > 0)) continue;
      o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
        << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
    }
  }

  // legend
  double ly = mt + 14;
  for (std::size_t si = 0; si < series.size(); ++si) {
    if (series[si].label.empty()) continue;
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    o << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << fmt(ly - 4)
      << "\" x2=\"" << ml + pw - 128 << "\" y2=\"" << fmt(ly - 4)
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << ml + pw - 122 << "\" y=\"" << fmt(ly)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[si].label
      << "</text>\n";
    ly += 16;
  }

  o << "</svg>\n";
  return o.str();
}

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  write_text_file(path, render_svg_plot(spec, series));
}

}  // namespace mfrp
