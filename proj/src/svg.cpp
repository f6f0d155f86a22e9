#include "fofpoly/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>

#include "fofpoly/errors.hpp"

namespace fofpoly {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool embed_timestamp) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.x) {
      require(v > 0.0, errc::invalid_argument, "svg: log axis needs positive x");
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      require(v > 0.0, errc::invalid_argument, "svg: log axis needs positive y");
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  require(xmin < xmax && ymin <= ymax, errc::invalid_argument, "svg: degenerate data range");
  if (ymin == ymax) {
    ymin *= 0.5;
    ymax *= 2.0;
  }
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    return kMarginLeft + plot_w * (std::log10(x) - lx0) / (lx1 - lx0);
  };
  auto py = [&](double y) {
    return kMarginTop + plot_h * (1.0 - (std::log10(y) - ly0) / (ly1 - ly0));
  };

  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  if (embed_timestamp) {
    char stamp[64];
    const std::time_t now = std::time(nullptr);
    std::tm tmv{};
    gmtime_r(&now, &tmv);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tmv);
    out << "<!-- generated " << stamp << " -->\n";
  }
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";

  // frame plus decade ticks
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    out << "<line x1=\"" << fixed3(x) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << fixed3(x) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fixed3(x) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">1e" << e
        << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fixed3(y) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << fixed3(y) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fixed3(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">1e" << e
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 "
      << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  double legend_y = kMarginTop + 14.0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << fixed3(px(s.x[i])) << ',' << fixed3(py(s.y[i]));
    }
    out << "\"/>\n";
    if (!s.dashed) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << fixed3(px(s.x[i])) << "\" cy=\"" << fixed3(py(s.y[i]))
            << "\" r=\"2.6\" fill=\"" << s.color << "\"/>\n";
      }
    }
    out << "<line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << fixed3(legend_y)
        << "\" x2=\"" << kMarginLeft + plot_w - 126 << "\" y2=\"" << fixed3(legend_y)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w - 120 << "\" y=\"" << fixed3(legend_y + 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    legend_y += 16.0;
  }
  out << "</svg>\n";
}

}  // namespace fofpoly
