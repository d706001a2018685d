#include "hdqp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hdqp/errors.hpp"

namespace hdqp::svg {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(lo < hi)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string render(const Plot& plot) {
  const int w = plot.width, h = plot.height;
  const int ml = 64, mr = 16, mt = 36, mb = 48;

  Range rx, ry;
  for (const Series& s : plot.series) {
    for (double v : s.x) rx.absorb(v);
    for (double v : s.y) ry.absorb(v);
  }
  rx.pad();
  ry.pad();

  auto sx = [&](double v) {
    return ml + (v - rx.lo) / (rx.hi - rx.lo) * (w - ml - mr);
  };
  auto sy = [&](double v) {
    return h - mb - (v - ry.lo) / (ry.hi - ry.lo) * (h - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << plot.title << "</text>\n";

  // Axes with 6 ticks per side.
  os << "<g stroke=\"#444\" stroke-width=\"1\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
     << "\" y2=\"" << h - mb << "\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << h - mb << "\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = rx.lo + t * (rx.hi - rx.lo) / 5.0;
    const double fy = ry.lo + t * (ry.hi - ry.lo) / 5.0;
    os << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << h - mb << "\" x2=\""
       << fmt(sx(fx)) << "\" y2=\"" << h - mb + 4 << "\"/>\n";
    os << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << h - mb + 16
       << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#222\">" << fmt(fx)
       << "</text>\n";
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
       << ml << "\" y2=\"" << fmt(sy(fy)) << "\"/>\n";
    os << "<text x=\"" << ml - 7 << "\" y=\"" << fmt(sy(fy) + 4)
       << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#222\">" << fmt(fy)
       << "</text>\n";
  }
  os << "</g>\n";

  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << plot.x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
        " transform=\"rotate(-90 16 "
     << (mt + h - mb) / 2 << ")\">" << plot.y_label << "</text>\n";

  int legend_y = mt + 8;
  for (const Series& s : plot.series) {
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.6\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
    os << "\"/>\n";
    if (!s.label.empty()) {
      os << "<line x1=\"" << w - mr - 150 << "\" y1=\"" << legend_y
         << "\" x2=\"" << w - mr - 126 << "\" y2=\"" << legend_y
         << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
         << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      os << "<text x=\"" << w - mr - 120 << "\" y=\"" << legend_y + 4
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
         << "</text>\n";
      legend_y += 16;
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const Plot& plot, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  os << render(plot);
}

}  // namespace hdqp::svg
