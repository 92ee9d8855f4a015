#include "trajtopo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace trajtopo {

namespace {

constexpr double kWidth = 480, kHeight = 480, kMargin = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

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

// Maps data coordinates in [0, x_max] x [0, y_max] onto the plot area.
struct Frame {
  double x_max, y_max;
  double sx(double x) const { return kMargin + (kWidth - 2 * kMargin) * x / x_max; }
  double sy(double y) const { return kHeight - kMargin - (kHeight - 2 * kMargin) * y / y_max; }
};

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"14\">" << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  os << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << num(f.sx(0)) << "\" y1=\"" << num(f.sy(0)) << "\" x2=\"" << num(f.sx(f.x_max))
     << "\" y2=\"" << num(f.sy(0)) << "\"/>\n"
     << "<line x1=\"" << num(f.sx(0)) << "\" y1=\"" << num(f.sy(0)) << "\" x2=\"" << num(f.sx(0))
     << "\" y2=\"" << num(f.sy(f.y_max)) << "\"/>\n"
     << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x_max * t / 4.0, yv = f.y_max * t / 4.0;
    os << "<text x=\"" << num(f.sx(xv)) << "\" y=\"" << num(f.sy(0) + 16)
       << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << num(f.sx(0) - 6) << "\" y=\"" << num(f.sy(yv) + 4)
       << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(xlabel) << "</text>\n"
     << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kHeight / 2 << ")\">" << escape(ylabel) << "</text>\n"
     << "</g>\n";
}

void glyph(std::ostringstream& os, int dim, double x, double y) {
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c"};
  const char* c = colours[std::clamp(dim, 0, 2)];
  if (dim == 0) {
    os << "<circle class=\"h0\" cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\"" << c
       << "\"/>\n";
  } else if (dim == 1) {
    os << "<rect class=\"h1\" x=\"" << num(x - 4) << "\" y=\"" << num(y - 4)
       << "\" width=\"8\" height=\"8\" fill=\"" << c << "\"/>\n";
  } else {
    os << "<polygon class=\"h2\" points=\"" << num(x) << ',' << num(y - 5) << ' ' << num(x - 5) << ','
       << num(y + 4) << ' ' << num(x + 5) << ',' << num(y + 4) << "\" fill=\"" << c << "\"/>\n";
  }
}

}  // namespace

std::string render_diagram_svg(const PersistenceDiagram& diagram, const std::string& title) {
  double top = 0.0;
  bool has_infinite = false;
  for (const auto& iv : diagram.intervals) {
    top = std::max(top, iv.birth);
    if (std::isfinite(iv.death))
      top = std::max(top, iv.death);
    else
      has_infinite = true;
  }
  if (top <= 0.0) top = 1.0;
  const double inf_level = top * 1.1;
  const Frame f{top * 1.15, top * 1.15};

  std::ostringstream os;
  open_svg(os, title);
  axes(os, f, "birth", "death");
  os << "<line id=\"diagonal\" x1=\"" << num(f.sx(0)) << "\" y1=\"" << num(f.sy(0)) << "\" x2=\""
     << num(f.sx(f.x_max)) << "\" y2=\"" << num(f.sy(f.y_max)) << "\" stroke=\"gray\"/>\n";
  if (has_infinite)
    os << "<line id=\"infinity\" x1=\"" << num(f.sx(0)) << "\" y1=\"" << num(f.sy(inf_level))
       << "\" x2=\"" << num(f.sx(f.x_max)) << "\" y2=\"" << num(f.sy(inf_level))
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  os << "<g id=\"points\">\n";
  for (const auto& iv : diagram.intervals)
    glyph(os, iv.dim, f.sx(iv.birth), f.sy(std::isfinite(iv.death) ? iv.death : inf_level));
  os << "</g>\n";
  // Legend.
  for (int d = 0; d <= 2; ++d) {
    const double y = kMargin + 14.0 * d;
    glyph(os, d, kWidth - 90, y);
    os << "<text x=\"" << kWidth - 80 << "\" y=\"" << num(y + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\">H" << d << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_betti_svg(const BettiCurve& curve, const std::string& title) {
  double x_max = curve.grid.empty() ? 1.0 : std::max(curve.grid.back(), 1e-12);
  std::size_t c_max = 1;
  for (auto c : curve.counts) c_max = std::max(c_max, c);
  const Frame f{x_max, static_cast<double>(c_max) * 1.1};

  std::ostringstream os;
  open_svg(os, title);
  axes(os, f, "scale", "Betti " + std::to_string(curve.dim));
  if (!curve.grid.empty()) {
    os << "<polyline id=\"curve\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < curve.grid.size(); ++j) {
      const double y = f.sy(static_cast<double>(curve.counts[j]));
      if (j > 0) os << num(f.sx(curve.grid[j])) << ',' << num(f.sy(static_cast<double>(curve.counts[j - 1]))) << ' ';
      os << num(f.sx(curve.grid[j])) << ',' << num(y) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trajtopo
