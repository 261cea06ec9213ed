#include "hrlmppi/svg.hpp"

#include <algorithm>
#include <fstream>

#include "hrlmppi/csv.hpp"

namespace hrlmppi {

namespace {
const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kW = 860, kH = 520;
constexpr double kLeft = 70, kRight = 200, kTop = 40, kBottom = 50;
}  // namespace

void render_curves_svg(const std::vector<CurveGroup>& groups,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::string& path) {
  if (groups.empty()) throw ConfigError("svg: nothing to plot");
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
      x_min = std::min(x_min, g.grid[i]);
      x_max = std::max(x_max, g.grid[i]);
      y_min = std::min(y_min, g.mean[i] - g.stddev[i]);
      y_max = std::max(y_max, g.mean[i] + g.stddev[i]);
    }
  }
  if (y_max <= y_min) y_max = y_min + 1;
  if (x_max <= x_min) x_max = x_min + 1;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
     << "' viewBox='0 0 " << kW << " " << kH << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << kLeft << "' y='24' font-size='16' font-family='sans-serif'>"
     << title << "</text>\n";

  // axes
  os << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
     << kTop + plot_h << "' stroke='black'/>\n";
  os << "<line x1='" << kLeft << "' y1='" << kTop + plot_h << "' x2='" << kLeft + plot_w
     << "' y2='" << kTop + plot_h << "' stroke='black'/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    os << "<text x='" << px(xv) << "' y='" << kTop + plot_h + 18
       << "' font-size='11' font-family='sans-serif' text-anchor='middle'>"
       << fmt_g9(xv) << "</text>\n";
    os << "<text x='" << kLeft - 8 << "' y='" << py(yv) + 4
       << "' font-size='11' font-family='sans-serif' text-anchor='end'>" << fmt_g9(yv)
       << "</text>\n";
    os << "<line x1='" << kLeft << "' y1='" << py(yv) << "' x2='" << kLeft + plot_w
       << "' y2='" << py(yv) << "' stroke='#dddddd' stroke-width='0.5'/>\n";
  }
  os << "<text x='" << kLeft + plot_w / 2 << "' y='" << kH - 12
     << "' font-size='13' font-family='sans-serif' text-anchor='middle'>" << x_label
     << "</text>\n";
  os << "<text x='16' y='" << kTop + plot_h / 2
     << "' font-size='13' font-family='sans-serif' transform='rotate(-90 16 "
     << kTop + plot_h / 2 << ")' text-anchor='middle'>" << y_label << "</text>\n";

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const char* color = kPalette[gi % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // +-std band
    os << "<polygon fill='" << color << "' fill-opacity='0.15' stroke='none' points='";
    for (std::size_t i = 0; i < g.grid.size(); ++i)
      os << px(g.grid[i]) << "," << py(g.mean[i] + g.stddev[i]) << " ";
    for (std::size_t i = g.grid.size(); i-- > 0;)
      os << px(g.grid[i]) << "," << py(g.mean[i] - g.stddev[i]) << " ";
    os << "'/>\n";
    // mean curve
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
    for (std::size_t i = 0; i < g.grid.size(); ++i)
      os << px(g.grid[i]) << "," << py(g.mean[i]) << " ";
    os << "'/>\n";
    // legend
    const double ly = kTop + 16 + 18 * static_cast<double>(gi);
    os << "<line x1='" << kLeft + plot_w + 10 << "' y1='" << ly << "' x2='"
       << kLeft + plot_w + 34 << "' y2='" << ly << "' stroke='" << color
       << "' stroke-width='2'/>\n";
    os << "<text x='" << kLeft + plot_w + 40 << "' y='" << ly + 4
       << "' font-size='11' font-family='sans-serif'>" << g.label << " (n=" << g.runs
       << ")</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace hrlmppi
