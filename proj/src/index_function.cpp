#include "fofpoly/index_function.hpp"

#include <cmath>

namespace fofpoly {

IndexFunction IndexFunction::holder(double r) {
  // r = 0 would give phi(0) = 1, which is not an index function
  require(r > 0.0, errc::invalid_argument, "holder index function needs exponent r > 0");
  IndexFunction f;
  f.holder_ = true;
  f.r_ = r;
  return f;
}

IndexFunction IndexFunction::table(std::vector<std::pair<double, double>> points) {
  require(points.size() >= 2, errc::invalid_argument, "index table needs at least two points");
  require(points.front().first == 0.0 && points.front().second == 0.0, errc::invalid_argument,
          "index table must start at (0, 0)");
  for (std::size_t i = 1; i < points.size(); ++i) {
    require(points[i].first > points[i - 1].first, errc::invalid_argument,
            "index table abscissae must be strictly increasing");
    require(points[i].second >= points[i - 1].second, errc::invalid_argument,
            "index table values must be non-decreasing");
  }
  IndexFunction f;
  f.holder_ = false;
  f.table_ = std::move(points);
  return f;
}

double IndexFunction::operator()(double x) const {
  require(x >= 0.0, errc::domain_error, "index function evaluated at negative argument");
  if (holder_) return std::pow(x, r_);
  if (x <= 0.0) return 0.0;
  // linear interpolation; extend the last segment beyond the table
  std::size_t hi = 1;
  while (hi + 1 < table_.size() && table_[hi].first < x) ++hi;
  const auto& [x0, y0] = table_[hi - 1];
  const auto& [x1, y1] = table_[hi];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace fofpoly
