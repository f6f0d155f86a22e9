#include "fofpoly/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fofpoly/rng.hpp"
#include "fofpoly/stats.hpp"

namespace fofpoly {

namespace {

void check_compatible(const PolyRegEstimate& est, const OracleModel& oracle) {
  require(est.degree == oracle.degree, errc::invalid_argument,
          "estimate and oracle have different feature degrees");
  require(same_grid(est.inputs.front().grid, oracle.inputs.front().grid), errc::grid_mismatch,
          "estimate and oracle inputs on different grids");
}

// <a_i, e_k> for every response mix row and cosine mode k
Eigen::MatrixXd mix_cosine(const Eigen::MatrixXd& mix, const GridPtr& s2, int max_k) {
  Eigen::MatrixXd out(mix.rows(), max_k + 1);
  for (int k = 0; k <= max_k; ++k) {
    const FunctionalSample basis = basis_sample(s2, k);
    out.col(k) = mix * (s2->weights.array() * basis.values.array()).matrix();
  }
  return out;
}

}  // namespace

ErrorContext make_error_context(const OracleModel& oracle, const TargetSpec& target,
                                const std::vector<FunctionalSample>& inputs) {
  ErrorContext context;
  context.modes = target_mode_ids(target);
  context.coords = oracle_mode_coords(oracle, inputs, context.modes);
  context.target_norm_sq = target_norm_sq(target, oracle);
  return context;
}

ErrorReport estimation_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target, const ErrorContext& context) {
  check_compatible(est, oracle);
  require(context.coords.rows() == est.n(), errc::invalid_argument,
          "estimation_error: context built for a different training set");
  const double n = static_cast<double>(est.n());

  const Eigen::MatrixXd mix = response_mix(est);
  const Eigen::VectorXd& w2 = est.responses.front().grid->weights;
  const double norm_est =
      (est.gram.entries.array() * (mix * w2.asDiagonal() * mix.transpose()).array()).sum() /
      (n * n);

  int max_k = 0;
  for (const auto& c : target.coeffs) max_k = std::max(max_k, c.k);
  const Eigen::MatrixXd mix_cos = mix_cosine(mix, est.responses.front().grid, max_k);

  double cross = 0.0;
  for (const auto& c : target.coeffs) {
    const auto mode_pos =
        std::lower_bound(context.modes.begin(), context.modes.end(), c.m) -
        context.modes.begin();
    const double weight = target.phi(oracle.eigenvalues(c.m)) * c.v;
    cross += weight * context.coords.col(mode_pos).dot(mix_cos.col(c.k)) / n;
  }

  ErrorReport report;
  report.s = 0.0;
  report.method = ErrorReport::Method::GramExact;
  report.value = std::sqrt(std::max(norm_est - 2.0 * cross + context.target_norm_sq, 0.0));
  return report;
}

ErrorReport estimation_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target) {
  return estimation_error(est, oracle, target,
                          make_error_context(oracle, target, est.inputs));
}

ErrorReport prediction_error(const PolyRegEstimate& est, const OracleModel& oracle,
                             const TargetSpec& target, const ProcessSpec& spec, int n_test,
                             std::uint64_t seed) {
  check_compatible(est, oracle);
  require(n_test >= 100, errc::invalid_argument, "prediction_error: need n_test >= 100");
  const GridPtr& s1 = est.inputs.front().grid;
  const GridPtr& s2 = est.responses.front().grid;

  std::vector<FunctionalSample> fresh;
  fresh.reserve(static_cast<std::size_t>(n_test));
  for (int w = 0; w < n_test; ++w) {
    fresh.push_back(draw_process(spec, s1, mix_seed(seed, 0x7E57, w)));
  }
  const std::vector<FunctionalSample> clean = clean_responses(oracle, target, fresh, s2);

  // batch predictions: (1/n) K C Y with K the fresh-by-train feature block
  const Eigen::MatrixXd kappa = cross_feature_gram(fresh, est.inputs, est.degree);
  const Eigen::MatrixXd preds =
      (kappa * response_mix(est)) / static_cast<double>(est.n());

  double acc = 0.0;
  for (int w = 0; w < n_test; ++w) {
    const Eigen::ArrayXd diff =
        preds.row(w).transpose().array() - clean[static_cast<std::size_t>(w)].values.array();
    acc += (s2->weights.array() * diff.square()).sum();
  }

  ErrorReport report;
  report.s = 0.5;
  report.method = ErrorReport::Method::HoldoutMc;
  report.n_test = n_test;
  report.value = std::sqrt(acc / n_test);
  return report;
}

double oracle_span_error(const PolyRegEstimate& est, const OracleModel& oracle,
                         const TargetSpec& target, double s, int max_mode, int max_k) {
  check_compatible(est, oracle);
  require(max_mode >= 1 && max_mode <= oracle.rank(), errc::invalid_argument,
          "oracle_span_error: bad mode range");
  const double n = static_cast<double>(est.n());

  std::vector<int> modes(static_cast<std::size_t>(max_mode));
  for (int m = 0; m < max_mode; ++m) modes[static_cast<std::size_t>(m)] = m;
  const Eigen::MatrixXd coords = oracle_mode_coords(oracle, est.inputs, modes);
  const Eigen::MatrixXd mix_cos = mix_cosine(response_mix(est), est.responses.front().grid, max_k);

  // estimate coefficients on the oracle basis: b_mk = (1/n) sum_i <a_i,e_k> coords_im
  Eigen::MatrixXd delta = (coords.transpose() * mix_cos) / n;  // modes x (max_k+1)
  for (const auto& c : target.coeffs) {
    if (c.m < max_mode && c.k <= max_k) {
      delta(c.m, c.k) -= target.phi(oracle.eigenvalues(c.m)) * c.v;
    }
  }
  double acc = 0.0;
  for (int m = 0; m < max_mode; ++m) {
    const double weight = std::pow(oracle.eigenvalues(m), 2.0 * s);
    acc += weight * delta.row(m).squaredNorm();
  }
  return std::sqrt(acc);
}

double effective_dimension(std::span<const double> eigenvalues, double lambda) {
  require(lambda > 0.0, errc::invalid_argument, "effective_dimension: lambda must be positive");
  double acc = 0.0;
  for (double mu : eigenvalues) {
    require(mu >= 0.0, errc::invalid_argument, "effective_dimension: negative eigenvalue");
    acc += mu / (mu + lambda);
  }
  return acc;
}

double effective_dimension(const Eigen::VectorXd& eigenvalues, double lambda) {
  return effective_dimension(
      std::span<const double>(eigenvalues.data(), static_cast<std::size_t>(eigenvalues.size())),
      lambda);
}

double theoretical_lambda(double n, const IndexFunction& phi, double b) {
  require(n >= 1.0, errc::invalid_argument, "theoretical_lambda: need n >= 1");
  require(b > 1.0, errc::invalid_argument, "theoretical_lambda: need decay b > 1");
  const double exponent = 0.5 + 0.5 / b;
  const auto psi = [&](double x) { return phi(x) * std::pow(x, exponent); };
  const double targetv = 1.0 / std::sqrt(n);
  require(psi(1.0) >= targetv, errc::out_of_range,
          "theoretical_lambda: n too small for the bracket");
  double lo = 1e-12, hi = 1.0;
  if (psi(lo) >= targetv) return lo;
  while ((hi - lo) > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) < targetv ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double theoretical_rate(double b, double r, double s) {
  require(b > 1.0, errc::invalid_argument, "theoretical_rate: need b > 1");
  require(r > 0.0, errc::invalid_argument, "theoretical_rate: need r > 0");
  require(s >= 0.0 && s <= 0.5, errc::invalid_argument, "theoretical_rate: need s in [0, 1/2]");
  return -b * (r + s) / (1.0 + b + 2.0 * r * b);
}

OlsFit rate_fit(std::span<const double> n, std::span<const double> mean_error) {
  require(n.size() == mean_error.size(), errc::invalid_argument, "rate_fit: length mismatch");
  require(n.size() >= 4, errc::invalid_argument, "rate_fit: need at least 4 points");
  std::vector<double> xs(n.size()), ys(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    require(n[i] > 0.0, errc::invalid_argument, "rate_fit: non-positive sample size");
    require(mean_error[i] > 0.0, errc::invalid_argument, "rate_fit: non-positive error");
    xs[i] = std::log(n[i]);
    ys[i] = std::log(mean_error[i]);
  }
  const LineFit line = fit_line(xs, ys);
  OlsFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  for (std::size_t i = 0; i < n.size(); ++i) {
    fit.max_abs_residual =
        std::max(fit.max_abs_residual, std::abs(ys[i] - line.intercept - line.slope * xs[i]));
  }
  return fit;
}

}  // namespace fofpoly
