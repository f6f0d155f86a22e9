#include "fofpoly/feature.hpp"

namespace fofpoly {

double geometric_feature_sum(double inner, int p) {
  require(p >= 0, errc::invalid_argument, "feature degree must be non-negative");
  double acc = 1.0;  // l = 0 term
  double term = 1.0;
  for (int l = 1; l <= p; ++l) {
    term *= inner;
    acc += term;
  }
  return acc;
}

double feature_inner(const FunctionalSample& x1, const FunctionalSample& x2, int p) {
  return geometric_feature_sum(l2_inner(x1, x2), p);
}

FeatureGram gram_matrix(const std::vector<FunctionalSample>& samples, int p) {
  require(!samples.empty(), errc::invalid_argument, "gram_matrix: empty sample set");
  require(p >= 0, errc::invalid_argument, "gram_matrix: negative degree");
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  const auto& grid = samples.front().grid;
  for (const auto& s : samples) {
    require(same_grid(s.grid, grid), errc::grid_mismatch, "gram_matrix: mixed grids");
  }
  FeatureGram gram;
  gram.degree = p;
  gram.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double value = feature_inner(samples[i], samples[j], p);
      gram.entries(i, j) = value;
      gram.entries(j, i) = value;
    }
  }
  // guard eigensolvers against round-off asymmetry
  gram.entries = 0.5 * (gram.entries + gram.entries.transpose()).eval();
  return gram;
}

Eigen::MatrixXd cross_feature_gram(const std::vector<FunctionalSample>& rows,
                                   const std::vector<FunctionalSample>& cols, int p) {
  require(!rows.empty() && !cols.empty(), errc::invalid_argument,
          "cross_feature_gram: empty sample set");
  require(p >= 0, errc::invalid_argument, "cross_feature_gram: negative degree");
  require(same_grid(rows.front().grid, cols.front().grid), errc::grid_mismatch,
          "cross_feature_gram: row and column grids differ");
  const Eigen::MatrixXd a = sample_values(rows);
  const Eigen::MatrixXd b = sample_values(cols);
  const Eigen::VectorXd& w = rows.front().grid->weights;
  Eigen::MatrixXd inner = a * w.asDiagonal() * b.transpose();
  for (Eigen::Index i = 0; i < inner.rows(); ++i) {
    for (Eigen::Index j = 0; j < inner.cols(); ++j) {
      inner(i, j) = geometric_feature_sum(inner(i, j), p);
    }
  }
  return inner;
}

}  // namespace fofpoly
