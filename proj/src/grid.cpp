#include "fofpoly/grid.hpp"

#include <cmath>

namespace fofpoly {

GridPtr make_grid(double lo, double hi, int m) {
  require(m >= 2, errc::invalid_argument, "make_grid: need at least 2 points");
  require(lo < hi, errc::invalid_argument, "make_grid: need lo < hi");
  auto grid = std::make_shared<Grid>();
  grid->lo = lo;
  grid->hi = hi;
  grid->points.resize(m);
  grid->weights.resize(m);
  const double h = (hi - lo) / (m - 1);
  for (int i = 0; i < m; ++i) {
    grid->points(i) = lo + h * i;
    grid->weights(i) = (i == 0 || i == m - 1) ? 0.5 * h : h;
  }
  grid->points(m - 1) = hi;
  return grid;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->lo == b->lo && a->hi == b->hi && a->points.size() == b->points.size() &&
         a->points == b->points;
}

double l2_inner(const FunctionalSample& f, const FunctionalSample& g) {
  require(same_grid(f.grid, g.grid), errc::grid_mismatch, "l2_inner: samples on different grids");
  return (f.grid->weights.array() * f.values.array() * g.values.array()).sum();
}

double l2_norm_sq(const FunctionalSample& f) {
  return (f.grid->weights.array() * f.values.array().square()).sum();
}

double l2_norm(const FunctionalSample& f) { return std::sqrt(std::max(l2_norm_sq(f), 0.0)); }

double cosine_basis(int k, double s, double lo, double hi) {
  const double len = hi - lo;
  if (k == 0) return 1.0 / std::sqrt(len);
  constexpr double pi = 3.14159265358979323846;
  return std::sqrt(2.0 / len) * std::cos(k * pi * (s - lo) / len);
}

FunctionalSample basis_sample(const GridPtr& grid, int k) {
  require(static_cast<bool>(grid), errc::invalid_argument, "basis_sample: null grid");
  FunctionalSample out{grid, Eigen::VectorXd(grid->size())};
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    out.values(i) = cosine_basis(k, grid->points(i), grid->lo, grid->hi);
  }
  return out;
}

Eigen::MatrixXd sample_values(const std::vector<FunctionalSample>& samples) {
  require(!samples.empty(), errc::invalid_argument, "sample_values: empty sample set");
  const auto& grid = samples.front().grid;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(samples.size()), grid->size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(same_grid(samples[i].grid, grid), errc::grid_mismatch,
            "sample_values: samples on different grids");
    out.row(static_cast<Eigen::Index>(i)) = samples[i].values.transpose();
  }
  return out;
}

}  // namespace fofpoly
