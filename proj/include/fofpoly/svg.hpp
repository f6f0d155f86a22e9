#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fofpoly {

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Minimal log-log line plot.  Output is byte-stable for identical input; an
// optional timestamp comment can be enabled explicitly.
void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool embed_timestamp = false);

}  // namespace fofpoly
