#pragma once

#include <Eigen/Core>
#include <vector>

#include "fofpoly/estimator.hpp"
#include "fofpoly/grid.hpp"

// Slow reference implementations on dense tensor grids.  Everything here is
// deliberately independent of the Gram eigen-path: features are materialized
// pointwise and the normal equation is assembled and solved directly in value
// space.  Used by the equivalence suites and the oracle-test command; not
// meant for production sizes.
namespace fofpoly::reference {

// values of the l-fold product feature prod_r x(s_{i_r}) on the tensor grid,
// index order (i_1, ..., i_l) with i_l fastest; l = 0 gives the single entry 1
Eigen::VectorXd feature_values(const FunctionalSample& x, int l);

// product quadrature weights on the l-fold tensor grid
Eigen::VectorXd tensor_weights(const GridPtr& grid, int l);

// brute-force feature inner product: sum over degrees of the full tensor
// quadrature of the materialized features
double brute_feature_inner(const FunctionalSample& x1, const FunctionalSample& x2, int p);

// one slope candidate: value fields for components l = 0..p
struct ComponentField {
  std::vector<TensorField> parts;
};

double components_norm_sq(const ComponentField& f, const GridPtr& s2, const GridPtr& s1);
double components_diff_norm_sq(const ComponentField& a, const ComponentField& b,
                               const GridPtr& s2, const GridPtr& s1);

// evaluate the slope on one input by full tensor quadrature
FunctionalSample apply_components(const ComponentField& f, const GridPtr& s2, const GridPtr& s1,
                                  const FunctionalSample& x);

// assemble the empirical normal operator on the tensor-grid value basis and
// solve (op + lambda I) beta = rhs; Tikhonov only
ComponentField direct_tikhonov(const std::vector<FunctionalSample>& inputs,
                               const std::vector<FunctionalSample>& responses, int p,
                               double lambda);

// materialize a fitted estimate as component fields (via beta_component)
ComponentField materialize_estimate(const PolyRegEstimate& est, std::int64_t tensor_budget);

}  // namespace fofpoly::reference
