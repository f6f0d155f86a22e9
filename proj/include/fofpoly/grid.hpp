#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "fofpoly/errors.hpp"

namespace fofpoly {

// Uniform grid on [lo, hi] with composite-trapezoid quadrature weights.
// Weights sum to hi - lo; the induced discrete inner product is exact for
// piecewise-linear integrands and second-order accurate for smooth ones.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return points.size(); }
  double length() const { return hi - lo; }
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double lo, double hi, int m);

bool same_grid(const GridPtr& a, const GridPtr& b);

// A real-valued function known at the grid points.
struct FunctionalSample {
  GridPtr grid;
  Eigen::VectorXd values;
};

double l2_inner(const FunctionalSample& f, const FunctionalSample& g);
double l2_norm_sq(const FunctionalSample& f);
double l2_norm(const FunctionalSample& f);

// Normalized cosine basis on [lo, hi]: k = 0 is the constant 1/sqrt(L),
// k >= 1 is sqrt(2/L) cos(k pi (s-lo)/L) with L = hi - lo.  Orthonormal in
// L2([lo,hi]), and the trapezoid rule integrates products of low modes on a
// uniform grid exactly (no endpoint correction terms, no aliasing while
// j + k < 2(m-1)).
double cosine_basis(int k, double s, double lo, double hi);
FunctionalSample basis_sample(const GridPtr& grid, int k);

// Stack sample values into a (count x grid size) matrix; validates that all
// samples share one grid.
Eigen::MatrixXd sample_values(const std::vector<FunctionalSample>& samples);

}  // namespace fofpoly
