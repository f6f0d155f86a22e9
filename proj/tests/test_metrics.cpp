#include <doctest.h>

#include <cmath>

#include "fofpoly/metrics.hpp"
#include "fofpoly/reference.hpp"
#include "fofpoly/rng.hpp"
#include "fofpoly/stats.hpp"

using namespace fofpoly;

namespace {

struct SmallWorld {
  GridPtr grid1;
  GridPtr grid2;
  ProcessSpec spec{10, 2.0, 1.0};
  OracleModel oracle;
  TargetSpec target;

  SmallWorld(int oracle_n = 200, int degree = 1, double r = 1.0, int modes = 4,
             std::uint64_t seed = 404)
      : grid1(make_grid(0.0, 1.0, 48)), grid2(make_grid(0.0, 1.0, 32)) {
    oracle = build_oracle(spec, grid1, oracle_n, degree, seed);
    target = make_target(oracle, IndexFunction::holder(r), 1.0, modes, seed + 1);
  }
};

// slope materialized from oracle weights, for brute-force cross-checks
reference::ComponentField materialize_target(const OracleModel& oracle, const TargetSpec& target,
                                             const GridPtr& grid1, const GridPtr& grid2) {
  const int p = oracle.degree;
  REQUIRE(p == 1);  // enough for these tests
  reference::ComponentField beta;
  beta.parts.resize(2);
  beta.parts[0].dims = {grid2->size()};
  beta.parts[0].data = Eigen::VectorXd::Zero(grid2->size());
  beta.parts[1].dims = {grid2->size(), grid1->size()};
  beta.parts[1].data = Eigen::VectorXd::Zero(grid2->size() * grid1->size());
  for (const auto& c : target.coeffs) {
    const double scale =
        1.0 / std::sqrt(static_cast<double>(oracle.sample_count()) * oracle.eigenvalues(c.m));
    double comp0 = 0.0;
    Eigen::VectorXd comp1 = Eigen::VectorXd::Zero(grid1->size());
    for (Eigen::Index w = 0; w < oracle.sample_count(); ++w) {
      comp0 += scale * oracle.weights(w, c.m);
      comp1 += scale * oracle.weights(w, c.m) * oracle.inputs[static_cast<std::size_t>(w)].values;
    }
    const double head = target.phi(oracle.eigenvalues(c.m)) * c.v;
    const FunctionalSample ek = basis_sample(grid2, c.k);
    beta.parts[0].data += head * comp0 * ek.values;
    for (Eigen::Index t = 0; t < grid2->size(); ++t) {
      beta.parts[1].data.segment(t * grid1->size(), grid1->size()) +=
          head * ek.values(t) * comp1;
    }
  }
  return beta;
}

}  // namespace

TEST_CASE("zero estimator error equals the target norm") {
  SmallWorld w;
  const Dataset data = gen_dataset(w.oracle, w.target, w.spec, {0.0, 4}, 6, w.grid2, 8);
  // cutoff above the top eigenvalue zeroes the estimator
  const FeatureGram gram = gram_matrix(data.inputs, w.oracle.degree);
  const EigenSystem eig = eigen_decompose_psd(gram.entries / 6.0);
  const auto est = fit(data.inputs, data.responses, w.oracle.degree, 2.0 * eig.values(0),
                       RegularizationFamily::spectral_cutoff());
  const auto err = estimation_error(est, w.oracle, w.target);
  CHECK(err.value ==
        doctest::Approx(std::sqrt(target_norm_sq(w.target, w.oracle))).epsilon(1e-10));
}

TEST_CASE("zero target with zero noise has zero error") {
  SmallWorld w;
  TargetSpec zero = w.target;
  for (auto& c : zero.coeffs) c.v = 0.0;
  const Dataset data = gen_dataset(w.oracle, zero, w.spec, {0.0, 4}, 6, w.grid2, 9);
  const auto est =
      fit(data.inputs, data.responses, w.oracle.degree, 0.1, RegularizationFamily::tikhonov());
  const auto err = estimation_error(est, w.oracle, zero);
  CHECK(err.value < 1e-10);
}

TEST_CASE("gram-exact error matches tensor-grid materialization") {
  SmallWorld w(150, 1, 1.0, 3, 611);
  const Dataset data = gen_dataset(w.oracle, w.target, w.spec, {0.01, 6}, 4, w.grid2, 10);
  const auto est =
      fit(data.inputs, data.responses, w.oracle.degree, 0.05, RegularizationFamily::tikhonov());
  const auto gram_exact = estimation_error(est, w.oracle, w.target);

  const auto est_field = reference::materialize_estimate(est, 1 << 22);
  const auto target_field = materialize_target(w.oracle, w.target, w.grid1, w.grid2);
  const double brute =
      std::sqrt(reference::components_diff_norm_sq(est_field, target_field, w.grid2, w.grid1));
  CHECK(gram_exact.value == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("prediction error vanishes when the estimator recovers the target") {
  // training inputs drawn from the oracle sample set keep everything in span
  SmallWorld w(150, 1, 1.0, 3, 733);
  const int n = 150;
  std::vector<FunctionalSample> xs = w.oracle.inputs;
  const std::vector<FunctionalSample> ys = clean_responses(w.oracle, w.target, xs, w.grid2);
  const FeatureGram gram = gram_matrix(xs, w.oracle.degree);
  const EigenSystem eig = eigen_decompose_psd(gram.entries / n);
  double smallest_positive = eig.values(0);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 1e-10 * eig.values(0)) smallest_positive = eig.values(k);
  }
  const auto est = fit(xs, ys, w.oracle.degree, 0.5 * smallest_positive,
                       RegularizationFamily::spectral_cutoff());
  const auto err = prediction_error(est, w.oracle, w.target, w.spec, 200, 5);
  CHECK(err.value < 1e-7);
  const auto est_err = estimation_error(est, w.oracle, w.target);
  CHECK(est_err.value < 1e-6);
}

TEST_CASE("holdout prediction error is stable in n_test") {
  SmallWorld w(150, 1, 1.0, 3, 997);
  const Dataset data = gen_dataset(w.oracle, w.target, w.spec, {0.04, 6}, 24, w.grid2, 11);
  const auto est =
      fit(data.inputs, data.responses, w.oracle.degree, 0.05, RegularizationFamily::tikhonov());
  // spread of independent holdout estimates at n_test
  std::vector<double> vals;
  for (int rep = 0; rep < 8; ++rep) {
    vals.push_back(
        prediction_error(est, w.oracle, w.target, w.spec, 400, mix_seed(300, rep)).value);
  }
  double mean = 0.0;
  for (double v : vals) mean += v / vals.size();
  double sd = 0.0;
  for (double v : vals) sd += (v - mean) * (v - mean) / (vals.size() - 1);
  sd = std::sqrt(sd);
  const double doubled =
      prediction_error(est, w.oracle, w.target, w.spec, 800, mix_seed(301, 0)).value;
  CHECK(std::abs(doubled - mean) < 3.0 * sd + 1e-12);
}

TEST_CASE("holdout error approaches the oracle-span norm on in-span instances") {
  SmallWorld w(2000, 1, 1.0, 3, 1234);
  // the zero estimator keeps the difference exactly in the oracle span
  std::vector<FunctionalSample> xs(w.oracle.inputs.begin(), w.oracle.inputs.begin() + 32);
  const std::vector<FunctionalSample> ys = clean_responses(w.oracle, w.target, xs, w.grid2);
  const FeatureGram gram = gram_matrix(xs, w.oracle.degree);
  const EigenSystem eig = eigen_decompose_psd(gram.entries / 32.0);
  const auto est = fit(xs, ys, w.oracle.degree, 2.0 * eig.values(0),
                       RegularizationFamily::spectral_cutoff());

  const double span_norm = oracle_span_error(est, w.oracle, w.target, 0.5,
                                             static_cast<int>(w.oracle.rank()), 3);
  const double holdout =
      prediction_error(est, w.oracle, w.target, w.spec, 5000, 17).value;
  CHECK(std::abs(holdout - span_norm) / span_norm < 0.05);
}

TEST_CASE("prediction error dominates estimation error scaled by the top eigenvalue") {
  SmallWorld w(300, 1, 1.0, 4, 51);
  std::vector<FunctionalSample> xs(w.oracle.inputs.begin(), w.oracle.inputs.begin() + 24);
  const std::vector<FunctionalSample> ys = clean_responses(w.oracle, w.target, xs, w.grid2);
  const auto est = fit(xs, ys, w.oracle.degree, 0.08, RegularizationFamily::tikhonov());
  const int rank = static_cast<int>(w.oracle.rank());
  const double s_half = oracle_span_error(est, w.oracle, w.target, 0.5, rank, 5);
  const double s_zero = oracle_span_error(est, w.oracle, w.target, 0.0, rank, 5);
  CHECK(s_half <= std::sqrt(w.oracle.eigenvalues(0) + 1e-12) * s_zero * (1.0 + 1e-10));
}

TEST_CASE("effective dimension closed forms") {
  CHECK(effective_dimension(std::vector<double>{0.5}, 0.5) == doctest::Approx(0.5));
  std::vector<double> spectrum{1.0, 0.25, 0.0625};
  double prev = 1e18;
  for (double lambda : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e4}) {
    const double dim = effective_dimension(spectrum, lambda);
    CHECK(dim < prev);
    CHECK(dim <= 3.0);
    prev = dim;
  }
  CHECK(effective_dimension(spectrum, 1e7) < 2e-7);
  CHECK_THROWS_AS(effective_dimension(spectrum, 0.0), Error);
  CHECK_THROWS_AS(effective_dimension(std::vector<double>{-1.0}, 0.5), Error);
}

TEST_CASE("effective dimension slope under power decay") {
  std::vector<double> spectrum(10000);
  for (int m = 1; m <= 10000; ++m) {
    spectrum[static_cast<std::size_t>(m - 1)] = std::pow(static_cast<double>(m), -2.0);
  }
  std::vector<double> lx, ly;
  for (double lambda : log_grid(1e-4, 1e-1, 16)) {
    lx.push_back(std::log(lambda));
    ly.push_back(std::log(effective_dimension(spectrum, lambda)));
  }
  const double slope = fit_line(lx, ly).slope;
  CHECK(std::abs(slope + 0.5) < 0.1);
}

TEST_CASE("theoretical lambda closed form and consistency") {
  // holder(r): lambda = n^{-b/(1+b+2rb)}
  {
    const double lambda = theoretical_lambda(1000.0, IndexFunction::holder(1.0), 2.0);
    const double closed = std::pow(1000.0, -2.0 / 7.0);
    CHECK(std::abs(lambda - closed) / closed < 1e-9);
  }
  {
    const double lambda = theoretical_lambda(16.0, IndexFunction::holder(0.5), 2.0);
    const double closed = std::pow(16.0, -2.0 / (1.0 + 2.0 + 2.0));
    CHECK(std::abs(lambda - closed) / closed < 1e-9);
  }
  // psi(lambda) = n^{-1/2} at the returned point
  for (double n : {64.0, 1024.0, 131072.0}) {
    const IndexFunction phi = IndexFunction::holder(1.5);
    const double b = 2.5;
    const double lambda = theoretical_lambda(n, phi, b);
    const double psi = phi(lambda) * std::pow(lambda, 0.5 + 0.5 / b);
    CHECK(std::abs(psi - 1.0 / std::sqrt(n)) * std::sqrt(n) < 1e-9);
  }
  // strictly decreasing in n
  double prev = 1.0;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    const double lambda = theoretical_lambda(n, IndexFunction::holder(1.0), 2.0);
    CHECK(lambda < prev);
    prev = lambda;
  }
  CHECK_THROWS_AS(theoretical_lambda(0.5, IndexFunction::holder(1.0), 2.0), Error);
  CHECK_THROWS_AS(theoretical_lambda(100.0, IndexFunction::holder(1.0), 0.9), Error);
}

TEST_CASE("tabulated index functions interpolate and stay admissible") {
  const auto table =
      IndexFunction::table({{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}});
  CHECK(table(0.0) == 0.0);
  CHECK(table(0.25) == doctest::Approx(0.125));
  CHECK(table(0.75) == doctest::Approx(0.625));
  CHECK(table(2.0) == doctest::Approx(2.5));  // extends the last segment
  CHECK_THROWS_AS(IndexFunction::table({{0.1, 0.0}, {1.0, 1.0}}), Error);
  CHECK_THROWS_AS(IndexFunction::table({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.25}}), Error);
  CHECK_THROWS_AS(IndexFunction::table({{0.0, 0.0}}), Error);

  // bisection accepts any admissible index function
  const double lambda = theoretical_lambda(256.0, table, 2.0);
  const double psi = table(lambda) * std::pow(lambda, 0.75);
  CHECK(std::abs(psi - 1.0 / 16.0) * 16.0 < 1e-9);
}

TEST_CASE("theoretical rate exponents") {
  CHECK(theoretical_rate(2.0, 1.0, 0.0) == doctest::Approx(-2.0 / 7.0).epsilon(1e-14));
  CHECK(theoretical_rate(2.0, 1.0, 0.5) == doctest::Approx(-3.0 / 7.0).epsilon(1e-14));
  CHECK(theoretical_rate(2.0, 1e6, 0.0) == doctest::Approx(-0.5).epsilon(1e-4));
  CHECK_THROWS_AS(theoretical_rate(1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(theoretical_rate(2.0, 1.0, 0.7), Error);
}

TEST_CASE("rate_fit recovers exact and perturbed power laws") {
  std::vector<double> n{64, 128, 256, 512, 1024};
  std::vector<double> exact, noisy, flat;
  Rng rng(12);
  for (double v : n) {
    const double e = 3.0 * std::pow(v, -1.0 / 3.0);
    exact.push_back(e);
    noisy.push_back(e * (1.0 + 0.01 * rng.uniform_pm()));
    flat.push_back(2.5);
  }
  CHECK(std::abs(rate_fit(n, exact).slope + 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(rate_fit(n, noisy).slope + 1.0 / 3.0) < 0.02);
  CHECK(std::abs(rate_fit(n, flat).slope) < 1e-14);
  CHECK_THROWS_AS(rate_fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}), Error);
  CHECK_THROWS_AS(rate_fit(n, std::vector<double>{1, 1, 0.0, 1, 1}), Error);
}
