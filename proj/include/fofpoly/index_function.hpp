#pragma once

#include <utility>
#include <vector>

#include "fofpoly/errors.hpp"

namespace fofpoly {

// Index function: non-decreasing, continuous, with value 0 at 0.  Either the
// Holder power t -> t^r (r > 0) or a piecewise-linear table through (0, 0).
class IndexFunction {
 public:
  static IndexFunction holder(double r);
  static IndexFunction table(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;

  bool is_holder() const { return holder_; }
  double holder_exponent() const { return r_; }

 private:
  IndexFunction() = default;
  bool holder_ = true;
  double r_ = 1.0;
  std::vector<std::pair<double, double>> table_;
};

}  // namespace fofpoly
