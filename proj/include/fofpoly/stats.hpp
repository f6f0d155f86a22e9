#pragma once

#include <cmath>
#include <span>

#include "fofpoly/errors.hpp"

namespace fofpoly {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// ordinary least squares line through (x_i, y_i)
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), errc::invalid_argument, "fit_line: length mismatch");
  require(x.size() >= 2, errc::invalid_argument, "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, errc::invalid_argument, "fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace fofpoly
