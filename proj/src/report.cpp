#include "paralayer/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paralayer/csv.hpp"

namespace paralayer {

std::string render_manifest(const Manifest& m) {
  std::string out;
  out += "tool = ";
  out += kToolName;
  out += ' ';
  out += kToolVersion;
  out += '\n';
  out += "subcommand = " + m.subcommand + '\n';
  out += "status = " + m.status + '\n';
  out += "wall_ms = " + csv_number(static_cast<long long>(m.wall_ms)) + '\n';
  if (!m.message.empty()) out += "message = " + m.message + '\n';
  if (!m.config_echo.empty()) {
    out += '\n';
    out += m.config_echo;
  }
  return out;
}

void write_manifest(const std::string& dir, const Manifest& m) {
  write_text_file(dir + "/manifest.txt", render_manifest(m));
}

namespace {

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string out(buf);
  for (char& c : out)
    if (c == ',') c = '.';
  return out;
}

}  // namespace

std::string render_ratio_svg(const std::vector<RatioRow<double>>& rows, double band_lo,
                             double band_hi) {
  if (rows.empty()) throw std::invalid_argument("render_ratio_svg: no rows");
  const double w = 640, hgt = 420, ml = 64, mr = 24, mt = 24, mb = 48;
  const double pw = w - ml - mr, ph = hgt - mt - mb;

  double x_lo = std::log10(rows.front().E), x_hi = x_lo;
  double y_hi = std::max(band_hi + 0.2, 1.2);
  for (const auto& r : rows) {
    const double x = std::log10(r.E);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_hi = std::max({y_hi, r.ratio_lower, r.ratio_upper});
  }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  const double y_lo = 0;
  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(w) + "\" height=\"" +
       svg_num(hgt) + "\" viewBox=\"0 0 " + svg_num(w) + " " + svg_num(hgt) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // admissible band, then the ratio = 1 guide
  const double bt = py(std::min(band_hi, y_hi)), bb = py(std::max(band_lo, y_lo));
  s += "<rect x=\"" + svg_num(ml) + "\" y=\"" + svg_num(bt) + "\" width=\"" + svg_num(pw) +
       "\" height=\"" + svg_num(bb - bt) + "\" fill=\"#dfe8f7\"/>\n";
  s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(py(1)) + "\" x2=\"" +
       svg_num(ml + pw) + "\" y2=\"" + svg_num(py(1)) +
       "\" stroke=\"#888888\" stroke-dasharray=\"5,4\"/>\n";

  // axes with one tick per decade and a few horizontal guides
  s += "<rect x=\"" + svg_num(ml) + "\" y=\"" + svg_num(mt) + "\" width=\"" + svg_num(pw) +
       "\" height=\"" + svg_num(ph) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (double x = std::ceil(x_lo); x <= x_hi + 1e-9; x += 1) {
    s += "<line x1=\"" + svg_num(px(x)) + "\" y1=\"" + svg_num(mt + ph) + "\" x2=\"" +
         svg_num(px(x)) + "\" y2=\"" + svg_num(mt + ph + 6) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + svg_num(px(x)) + "\" y=\"" + svg_num(mt + ph + 22) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">1e" +
         csv_number(static_cast<long long>(std::llround(x))) + "</text>\n";
  }
  for (double y = 0; y <= y_hi + 1e-9; y += 0.5) {
    s += "<line x1=\"" + svg_num(ml - 6) + "\" y1=\"" + svg_num(py(y)) + "\" x2=\"" +
         svg_num(ml) + "\" y2=\"" + svg_num(py(y)) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + svg_num(ml - 10) + "\" y=\"" + svg_num(py(y) + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" + svg_num(y) +
         "</text>\n";
  }
  s += "<text x=\"" + svg_num(ml + pw / 2) + "\" y=\"" + svg_num(hgt - 10) +
       "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">E</text>\n";
  s += "<text x=\"16\" y=\"" + svg_num(mt + ph / 2) +
       "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
       "16 " + svg_num(mt + ph / 2) + ")\">N / asymptote</text>\n";

  auto polyline = [&](const char* color, bool upper) {
    std::string pts;
    for (const auto& r : rows) {
      const double y = upper ? r.ratio_upper : r.ratio_lower;
      pts += svg_num(px(std::log10(r.E))) + "," + svg_num(py(std::min(y, y_hi))) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    for (const auto& r : rows) {
      const double y = upper ? r.ratio_upper : r.ratio_lower;
      s += "<circle cx=\"" + svg_num(px(std::log10(r.E))) + "\" cy=\"" +
           svg_num(py(std::min(y, y_hi))) + "\" r=\"3.5\" fill=\"";
      s += color;
      s += "\"/>\n";
    }
  };
  polyline("#1f77b4", false);
  polyline("#d62728", true);

  s += "<text x=\"" + svg_num(ml + 10) + "\" y=\"" + svg_num(mt + 18) +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">lower proxy</text>\n";
  s += "<text x=\"" + svg_num(ml + 10) + "\" y=\"" + svg_num(mt + 34) +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">upper proxy</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace paralayer
