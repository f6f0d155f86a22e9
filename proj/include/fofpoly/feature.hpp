#pragma once

#include <Eigen/Core>
#include <vector>

#include "fofpoly/grid.hpp"

namespace fofpoly {

// Gram matrix of the polynomial feature map chi(x) = (1, x, x(x)x, ...).
// Entry (i,j) is sum_{l=0}^{p} <x_i, x_j>^l because the L2 inner product of
// l-fold products factorizes into the l-th power of <x_i, x_j>.
struct FeatureGram {
  int degree = 0;
  Eigen::MatrixXd entries;

  Eigen::Index size() const { return entries.rows(); }
};

// sum_{l=0}^{p} inner^l with the 0^0 = 1 convention, so the constant
// (intercept) feature always contributes.
double geometric_feature_sum(double inner, int p);

double feature_inner(const FunctionalSample& x1, const FunctionalSample& x2, int p);

FeatureGram gram_matrix(const std::vector<FunctionalSample>& samples, int p);

// Rectangular block of feature inner products between two sample sets,
// same entry formula as gram_matrix but assembled via one weighted matrix
// product (rows and cols may be large).
Eigen::MatrixXd cross_feature_gram(const std::vector<FunctionalSample>& rows,
                                   const std::vector<FunctionalSample>& cols, int p);

}  // namespace fofpoly
