#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "fofpoly/feature.hpp"
#include "fofpoly/grid.hpp"
#include "fofpoly/regularization.hpp"

namespace fofpoly {

// Regularized least squares for function-on-function polynomial regression,
// reduced to an n x n eigenproblem.
//
// The empirical normal operator acts as identity on the response argument and
// as the feature covariance Gamma_n = (1/n) sum_i chi^i (x) chi^i on the
// feature argument.  With T e_i = chi^i the synthesis map of the training
// features, Gamma_n = (1/n) T T* and T* T = M (the feature Gram), so for any
// filter g
//
//     g(Gamma_n) chi^j = sum_i [U g(D) U^T]_{ij} chi^i,   (1/n) M = U D U^T.
//
// Applying this to the empirical right-hand side (1/n) sum_j Y_j (x) chi^j
// gives the fitted slope
//
//     beta = (1/n) sum_{i,j} C_{ij}  Y_j (x) chi^i,   C = U g_lambda(D) U^T,
//
// which is all the estimator ever needs: predictions, norms and component
// fields reduce to Gram algebra over C, M and the training responses.

struct EigenSystem {
  Eigen::VectorXd values;   // descending, negative round-off clamped to 0
  Eigen::MatrixXd vectors;  // orthonormal columns
};

EigenSystem eigen_decompose_psd(const Eigen::MatrixXd& sym);

// C = U g_lambda(D) U^T.  Landweber requires spectra in [0, 1]: eigenvalues
// are divided by eta = max(d_1, 1) and the filter output scaled back by
// 1/eta.  Returns eta through eta_out when given.
Eigen::MatrixXd apply_filter(const EigenSystem& eig, const RegularizationFamily& family,
                             double lambda, double* eta_out = nullptr);

struct PolyRegEstimate {
  int degree = 0;
  double lambda = 0.0;
  RegularizationFamily family;
  Eigen::MatrixXd coeff;  // C, symmetric
  std::vector<FunctionalSample> inputs;
  std::vector<FunctionalSample> responses;
  FeatureGram gram;  // M of the training inputs
  double landweber_scale = 1.0;

  Eigen::Index n() const { return coeff.rows(); }
};

PolyRegEstimate fit(std::vector<FunctionalSample> inputs, std::vector<FunctionalSample> responses,
                    int degree, double lambda, const RegularizationFamily& family);

// Same as fit but reuses an existing Gram/eigendecomposition, the dominant
// cost pattern when sweeping lambda on one dataset.
PolyRegEstimate fit_from_eigensystem(const EigenSystem& eig, const FeatureGram& gram,
                                     std::vector<FunctionalSample> inputs,
                                     std::vector<FunctionalSample> responses, int degree,
                                     double lambda, const RegularizationFamily& family);

FunctionalSample predict(const PolyRegEstimate& est, const FunctionalSample& x_new);

// rows a_i = sum_j C_ij Y_j as an (n x |S2 grid|) matrix
Eigen::MatrixXd response_mix(const PolyRegEstimate& est);

// squared L2 norm of the represented slope:
// (1/n^2) sum_{i,i'} M_{ii'} <a_i, a_{i'}>_{L2(S2)}
double estimate_norm_sq(const PolyRegEstimate& est);

// Dense value array over the S2 grid times the l-fold S1 grid, index order
// (t, s_1, ..., s_l) with t slowest.
struct TensorField {
  std::vector<Eigen::Index> dims;
  Eigen::VectorXd data;
};

TensorField beta_component(const PolyRegEstimate& est, int l, std::int64_t tensor_budget);

}  // namespace fofpoly
