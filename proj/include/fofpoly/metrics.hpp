#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fofpoly/estimator.hpp"
#include "fofpoly/index_function.hpp"
#include "fofpoly/synth.hpp"

namespace fofpoly {

// Unified error ||(normal operator)^s (beta-hat - beta*)|| at s = 0
// (estimation) and s = 1/2 (prediction).
struct ErrorReport {
  enum class Method { GramExact, HoldoutMc };
  double s = 0.0;
  double value = 0.0;
  Method method = Method::GramExact;
  int n_test = 0;
};

// Exact L2 distance between the fitted slope and the synthetic target,
// expanded as ||bh||^2 - 2 <bh, b*> + ||b*||^2 in closed Gram form.
ErrorReport estimation_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target);

// The lambda-independent part of the error algebra for one training set:
// mode coordinates of the training features and the target norm.  Lets a
// lambda sweep on a fixed dataset skip the train-by-oracle cross Gram.
struct ErrorContext {
  std::vector<int> modes;
  Eigen::MatrixXd coords;  // n x |modes|
  double target_norm_sq = 0.0;
};

ErrorContext make_error_context(const OracleModel& oracle, const TargetSpec& target,
                                const std::vector<FunctionalSample>& inputs);

ErrorReport estimation_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target, const ErrorContext& context);

// Held-out Monte Carlo estimate of the prediction error: root mean squared
// L2(S2) distance between predictions and clean responses on fresh inputs.
ErrorReport prediction_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target, const ProcessSpec& spec, int n_test,
                             std::uint64_t seed);

// Diagnostic s-norm of (beta-hat - beta*) restricted to the oracle eigenspan,
// over eigen-modes m < max_mode and response cosine modes k <= max_k.  Only
// meaningful when both slopes essentially live there.
double oracle_span_error(const PolyRegEstimate& est, const OracleModel& oracle,
                         const TargetSpec& target, double s, int max_mode, int max_k);

// trace of Gamma (Gamma + lambda)^{-1} for a non-negative spectrum
double effective_dimension(std::span<const double> eigenvalues, double lambda);
double effective_dimension(const Eigen::VectorXd& eigenvalues, double lambda);

// Solves phi(x) x^{(b+1)/(2b)} = n^{-1/2} for x by bisection on [1e-12, 1];
// the balanced regularization level for sample size n under spectral decay b.
double theoretical_lambda(double n, const IndexFunction& phi, double b);

// rate exponent -b(r+s)/(1+b+2rb) for the Holder scale
double theoretical_rate(double b, double r, double s);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

// least squares slope of log(error) against log(n)
OlsFit rate_fit(std::span<const double> n, std::span<const double> mean_error);

struct RateReport {
  std::vector<double> n;
  std::vector<double> mean_error;
  std::vector<double> std_error;
  double fitted_slope = 0.0;
  double theoretical_slope = 0.0;
  int replicates = 0;
};

}  // namespace fofpoly
