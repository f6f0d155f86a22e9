#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "fofpoly/feature.hpp"
#include "fofpoly/grid.hpp"
#include "fofpoly/index_function.hpp"

namespace fofpoly {

// Bounded random input process: truncated expansion over the cosine basis
// with uniform coefficients, X = sum_{k=1}^{K} xi_k c k^{-a/2} e_k where
// xi_k ~ U[-sqrt(3), sqrt(3)] (unit variance) and c is sized so that
// ||X||^2 <= bound holds for every draw, not just in expectation.
struct ProcessSpec {
  int modes = 50;      // K
  double decay = 2.0;  // a
  double bound = 1.0;  // kappa
};

double process_scale(const ProcessSpec& spec);

FunctionalSample draw_process(const ProcessSpec& spec, const GridPtr& grid, std::uint64_t seed);

// Large-sample empirical surrogate for the feature covariance: inputs, their
// feature Gram, the spectrum of (1/N) M with eigenvector weights (column m
// gives the unit eigenfunction as (1/sqrt(N mu_m)) sum_w V_wm chi^w), and the
// fitted spectral decay exponent.
struct OracleModel {
  std::vector<FunctionalSample> inputs;
  FeatureGram gram;
  Eigen::VectorXd eigenvalues;  // descending, modes below 1e-12 * mu_1 dropped
  Eigen::MatrixXd weights;      // N x rank
  double decay_hat = 0.0;       // b-hat
  int degree = 0;

  Eigen::Index rank() const { return eigenvalues.size(); }
  Eigen::Index sample_count() const { return weights.rows(); }
};

OracleModel build_oracle(const ProcessSpec& spec, const GridPtr& grid, int n_samples, int degree,
                         std::uint64_t seed);

// One active coefficient of the synthetic slope: eigen-mode m (0-based) of
// the oracle operator paired with response cosine mode k; the slope carries
// phi(mu_m) * v on that basis element.
struct ActiveMode {
  int m = 0;
  int k = 1;
  double v = 0.0;
};

struct TargetSpec {
  IndexFunction phi = IndexFunction::holder(1.0);
  double radius = 1.0;
  std::vector<ActiveMode> coeffs;
};

// Draws v uniformly on modes m < n_modes, k in {1,2,3}, rescaled so that
// sum v^2 = R^2; the slope then satisfies the source condition with respect
// to the oracle operator by construction.
TargetSpec make_target(const OracleModel& oracle, const IndexFunction& phi, double radius,
                       int n_modes, std::uint64_t seed);

// sum over active coefficients of (phi(mu_m) v)^2
double target_norm_sq(const TargetSpec& target, const OracleModel& oracle);

// <chi(x_i), phihat_m> for each sample and each requested eigen-mode
Eigen::MatrixXd oracle_mode_coords(const OracleModel& oracle,
                                   const std::vector<FunctionalSample>& xs,
                                   const std::vector<int>& mode_ids);

std::vector<int> target_mode_ids(const TargetSpec& target);

std::vector<FunctionalSample> clean_responses(const OracleModel& oracle, const TargetSpec& target,
                                              const std::vector<FunctionalSample>& xs,
                                              const GridPtr& grid_s2);

// White-ish noise in a finite cosine basis: K_noise modes with equal per-mode
// variance sigma2 / K_noise, so the expected squared norm is sigma2 exactly.
struct NoiseSpec {
  double sigma2 = 0.0;
  int modes = 25;
};

FunctionalSample draw_noise(const NoiseSpec& noise, const GridPtr& grid, std::uint64_t seed);

struct Dataset {
  std::vector<FunctionalSample> inputs;
  std::vector<FunctionalSample> responses;
};

Dataset gen_dataset(const OracleModel& oracle, const TargetSpec& target, const ProcessSpec& spec,
                    const NoiseSpec& noise, int n, const GridPtr& grid_s2, std::uint64_t seed);

}  // namespace fofpoly
