#include "cavityspdc/svg.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cavityspdc/csv.hh"
#include "cavityspdc/errors.hh"

namespace spdc {

namespace {

// plot box geometry shared by both figure kinds
constexpr double W = 760, H = 560;
constexpr double ML = 78, MR = 24, MT = 42, MB = 58;
constexpr double PW = W - ML - MR, PH = H - MT - MB;

std::string num(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

// tick positions at a 1/2/5 decade step giving roughly `want` divisions
std::vector<double> ticks(double lo, double hi, int want = 6) {
  const double range = hi - lo;
  if (!(range > 0.0)) return {lo};
  double step = std::pow(10.0, std::floor(std::log10(range / want)));
  for (double mult : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0})
    if (range / (step * mult) <= want) {
      step *= mult;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * range;
       t += step)
    out.push_back(std::abs(t) < 1e-12 * range ? 0.0 : t);
  return out;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void open_figure(std::string& svg, const std::string& title,
                 const std::string& x_label, const std::string& y_label) {
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W, "%.0f") +
         "\" height=\"" + num(H, "%.0f") + "\" viewBox=\"0 0 " +
         num(W, "%.0f") + " " + num(H, "%.0f") + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + num(W / 2) + "\" y=\"26\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + esc(title) +
         "</text>\n";
  svg += "<text x=\"" + num(ML + PW / 2) + "\" y=\"" + num(H - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" + esc(x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + num(MT + PH / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 " + num(MT + PH / 2) +
         ")\">" + esc(y_label) + "</text>\n";
}

void draw_axes(std::string& svg, double x_lo, double x_hi, double y_lo,
               double y_hi) {
  const auto px = [&](double x) {
    return ML + (x - x_lo) / (x_hi - x_lo) * PW;
  };
  const auto py = [&](double y) {
    return MT + PH - (y - y_lo) / (y_hi - y_lo) * PH;
  };
  svg += "<rect x=\"" + num(ML) + "\" y=\"" + num(MT) + "\" width=\"" +
         num(PW) + "\" height=\"" + num(PH) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (double t : ticks(x_lo, x_hi)) {
    const double x = px(t);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(MT + PH) + "\" x2=\"" +
           num(x) + "\" y2=\"" + num(MT + PH + 5) +
           "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(MT + PH + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ticks(y_lo, y_hi)) {
    const double y = py(t);
    svg += "<line x1=\"" + num(ML - 5) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(ML) + "\" y2=\"" + num(y) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + num(ML - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + tick_label(t) + "</text>\n";
  }
}

}  // namespace

std::array<uint8_t, 3> heat_color(double v) {
  // ramp stops at v = 0, 0.2, 0.4, 0.6, 0.8, 1 from near black through
  // violet and ember to pale yellow; linear interpolation between stops
  static constexpr double stops[6][3] = {
      {0, 0, 4},      {49, 10, 94},   {120, 28, 109},
      {188, 55, 84},  {238, 105, 37}, {252, 255, 164}};
  v = std::clamp(v, 0.0, 1.0);
  const double pos = v * 5.0;
  const int band = std::min(4, int(pos));
  const double f = pos - band;
  std::array<uint8_t, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[c] = uint8_t(std::lround(stops[band][c] +
                                 f * (stops[band + 1][c] - stops[band][c])));
  return rgb;
}

void write_heatmap_svg(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const Eigen::MatrixXd& z, double x_lo, double x_hi,
                       double y_lo, double y_hi) {
  if (z.rows() < 1 || z.cols() < 1)
    throw DomainError("heatmap: empty matrix");
  // block-average down to a drawable cell count
  const int max_cells = 200;
  const int bx = std::max(1, int((z.rows() + max_cells - 1) / max_cells));
  const int by = std::max(1, int((z.cols() + max_cells - 1) / max_cells));
  const int nx = int((z.rows() + bx - 1) / bx);
  const int ny = int((z.cols() + by - 1) / by);
  Eigen::MatrixXd small = Eigen::MatrixXd::Zero(nx, ny);
  for (int i = 0; i < z.rows(); ++i)
    for (int j = 0; j < z.cols(); ++j)
      small(i / bx, j / by) += z(i, j);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int ci = std::min<int>(bx, int(z.rows()) - i * bx);
      const int cj = std::min<int>(by, int(z.cols()) - j * by);
      small(i, j) /= double(ci * cj);
    }
  const double peak = small.maxCoeff();
  if (peak > 0.0) small /= peak;

  std::string svg;
  open_figure(svg, title, x_label, y_label);
  const double cw = PW / nx, ch = PH / ny;
  for (int j = 0; j < ny; ++j) {
    // merge horizontal runs of identical color into single rects
    int i = 0;
    while (i < nx) {
      const auto rgb = heat_color(std::sqrt(std::max(0.0, small(i, j))));
      int run = 1;
      while (i + run < nx &&
             heat_color(std::sqrt(std::max(0.0, small(i + run, j)))) == rgb)
        ++run;
      char color[8];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", rgb[0], rgb[1],
                    rgb[2]);
      svg += "<rect x=\"" + num(ML + i * cw) + "\" y=\"" +
             num(MT + PH - (j + 1) * ch) + "\" width=\"" +
             num(run * cw + 0.5) + "\" height=\"" + num(ch + 0.5) +
             "\" fill=\"" + color + "\"/>\n";
      i += run;
    }
  }
  draw_axes(svg, x_lo, x_hi, y_lo, y_hi);
  svg += "</svg>\n";
  atomic_write(path, svg);
}

void write_lineplot_svg(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<LineSeries>& series) {
  if (series.empty()) throw DomainError("lineplot: no series");
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const LineSeries& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw DomainError("lineplot: bad series '" + s.label + "'");
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!(x_hi > x_lo)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  const double pad = (y_hi - y_lo) > 0 ? 0.06 * (y_hi - y_lo) : 0.5;
  y_lo -= pad;
  y_hi += pad;

  static const char* palette[] = {"#1f3b99", "#b03030", "#1d7d4f",
                                  "#8a5bb8", "#b07b20", "#3b8f9e"};
  std::string svg;
  open_figure(svg, title, x_label, y_label);
  const auto px = [&](double x) {
    return ML + (x - x_lo) / (x_hi - x_lo) * PW;
  };
  const auto py = [&](double y) {
    return MT + PH - (y - y_lo) / (y_hi - y_lo) * PH;
  };
  for (size_t si = 0; si < series.size(); ++si) {
    const LineSeries& s = series[si];
    std::string pts;
    for (size_t i = 0; i < s.x.size(); ++i)
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    svg += "<polyline points=\"" + pts +
           "\" fill=\"none\" stroke-width=\"1.6\" stroke=\"" +
           palette[si % 6] + "\"/>\n";
    // legend entry
    const double ly = MT + 16 + 18 * double(si);
    svg += "<line x1=\"" + num(ML + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(ML + 34) + "\" y2=\"" + num(ly) + "\" stroke-width=\"1.6\" "
           "stroke=\"" + palette[si % 6] + "\"/>\n";
    svg += "<text x=\"" + num(ML + 40) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + esc(s.label) +
           "</text>\n";
  }
  draw_axes(svg, x_lo, x_hi, y_lo, y_hi);
  svg += "</svg>\n";
  atomic_write(path, svg);
}

}  // namespace spdc
