#include "fofpoly/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace fofpoly {

EigenSystem eigen_decompose_psd(const Eigen::MatrixXd& sym) {
  require(sym.rows() == sym.cols(), errc::invalid_argument, "eigen_decompose_psd: not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  require(solver.info() == Eigen::Success, errc::numeric_error, "eigendecomposition failed");
  const Eigen::Index n = sym.rows();
  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; flip to descending and clamp round-off
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = std::max(solver.eigenvalues()(n - 1 - k), 0.0);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Eigen::MatrixXd apply_filter(const EigenSystem& eig, const RegularizationFamily& family,
                             double lambda, double* eta_out) {
  require(lambda > 0.0, errc::invalid_argument, "apply_filter: lambda must be positive");
  double eta = 1.0;
  if (family.kind == FilterKind::Landweber && eig.values.size() > 0) {
    eta = std::max(eig.values(0), 1.0);
  }
  if (eta_out) *eta_out = eta;
  Eigen::VectorXd filtered(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (family.kind == FilterKind::Landweber) {
      filtered(k) = g_apply(family, lambda, eig.values(k) / eta) / eta;
    } else {
      filtered(k) = g_apply(family, lambda, eig.values(k));
    }
  }
  return eig.vectors * filtered.asDiagonal() * eig.vectors.transpose();
}

PolyRegEstimate fit_from_eigensystem(const EigenSystem& eig, const FeatureGram& gram,
                                     std::vector<FunctionalSample> inputs,
                                     std::vector<FunctionalSample> responses, int degree,
                                     double lambda, const RegularizationFamily& family) {
  PolyRegEstimate est;
  est.degree = degree;
  est.lambda = lambda;
  est.family = family;
  est.coeff = apply_filter(eig, family, lambda, &est.landweber_scale);
  est.gram = gram;
  est.inputs = std::move(inputs);
  est.responses = std::move(responses);
  return est;
}

PolyRegEstimate fit(std::vector<FunctionalSample> inputs, std::vector<FunctionalSample> responses,
                    int degree, double lambda, const RegularizationFamily& family) {
  require(!inputs.empty(), errc::invalid_argument, "fit: empty training set");
  require(inputs.size() == responses.size(), errc::invalid_argument,
          "fit: input/response count mismatch");
  require(lambda > 0.0, errc::invalid_argument, "fit: lambda must be positive");
  const auto& s2 = responses.front().grid;
  for (const auto& y : responses) {
    require(same_grid(y.grid, s2), errc::grid_mismatch, "fit: responses on mixed grids");
  }
  FeatureGram gram = gram_matrix(inputs, degree);
  const double n = static_cast<double>(inputs.size());
  EigenSystem eig = eigen_decompose_psd(gram.entries / n);
  return fit_from_eigensystem(eig, gram, std::move(inputs), std::move(responses), degree, lambda,
                              family);
}

FunctionalSample predict(const PolyRegEstimate& est, const FunctionalSample& x_new) {
  require(same_grid(x_new.grid, est.inputs.front().grid), errc::grid_mismatch,
          "predict: input on a different grid");
  const Eigen::Index n = est.n();
  Eigen::VectorXd kappa(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kappa(i) = feature_inner(x_new, est.inputs[static_cast<std::size_t>(i)], est.degree);
  }
  const Eigen::VectorXd mix = (est.coeff * kappa) / static_cast<double>(n);
  FunctionalSample out{est.responses.front().grid,
                       Eigen::VectorXd::Zero(est.responses.front().grid->size())};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values += mix(j) * est.responses[static_cast<std::size_t>(j)].values;
  }
  return out;
}

Eigen::MatrixXd response_mix(const PolyRegEstimate& est) {
  return est.coeff * sample_values(est.responses);
}

double estimate_norm_sq(const PolyRegEstimate& est) {
  const Eigen::MatrixXd a = response_mix(est);
  const Eigen::VectorXd& w = est.responses.front().grid->weights;
  const Eigen::MatrixXd inner = a * w.asDiagonal() * a.transpose();
  const double n = static_cast<double>(est.n());
  return (est.gram.entries.array() * inner.array()).sum() / (n * n);
}

TensorField beta_component(const PolyRegEstimate& est, int l, std::int64_t tensor_budget) {
  require(l >= 0 && l <= est.degree, errc::invalid_argument,
          "beta_component: l outside [0, degree]");
  const GridPtr& s1 = est.inputs.front().grid;
  const GridPtr& s2 = est.responses.front().grid;
  const Eigen::Index m1 = s1->size();
  const Eigen::Index m2 = s2->size();
  std::int64_t cells = m2;
  require(cells <= tensor_budget, errc::resource_limit, "beta_component: budget exceeded");
  for (int r = 0; r < l; ++r) {
    // divide instead of multiplying so the check cannot overflow
    require(cells <= tensor_budget / m1, errc::resource_limit,
            "beta_component: budget exceeded");
    cells *= m1;
  }

  const Eigen::MatrixXd a = response_mix(est);  // n x m2
  const Eigen::Index n = est.n();
  const std::int64_t block = cells / m2;  // m1^l

  TensorField field;
  field.dims.assign(1, m2);
  for (int r = 0; r < l; ++r) field.dims.push_back(m1);
  field.data = Eigen::VectorXd::Zero(cells);

  // feature values of x_i on the l-fold tensor grid, then the rank-one
  // accumulation (1/n) sum_i a_i (t) prod_r x_i(s_r)
  Eigen::VectorXd prod(block);
  for (Eigen::Index i = 0; i < n; ++i) {
    prod.setOnes();
    const Eigen::VectorXd& x = est.inputs[static_cast<std::size_t>(i)].values;
    std::int64_t repeat = 1;  // x varies fastest in the last tensor index
    for (int r = 0; r < l; ++r) {
      for (std::int64_t idx = 0; idx < block; ++idx) {
        prod(idx) *= x((idx / repeat) % m1);
      }
      repeat *= m1;
    }
    for (Eigen::Index t = 0; t < m2; ++t) {
      field.data.segment(t * block, block) += (a(i, t) / static_cast<double>(n)) * prod;
    }
  }
  return field;
}

}  // namespace fofpoly
