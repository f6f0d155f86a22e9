#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fofpoly/estimator.hpp"
#include "fofpoly/reference.hpp"
#include "fofpoly/rng.hpp"

using namespace fofpoly;

namespace {

std::vector<FunctionalSample> random_samples(const GridPtr& grid, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FunctionalSample> out;
  for (int i = 0; i < n; ++i) {
    FunctionalSample s{grid, Eigen::VectorXd(grid->size())};
    for (Eigen::Index k = 0; k < grid->size(); ++k) s.values(k) = rng.uniform_pm();
    out.push_back(std::move(s));
  }
  return out;
}

double relative_gap(const reference::ComponentField& a, const reference::ComponentField& b,
                    const GridPtr& s2, const GridPtr& s1) {
  const double diff = reference::components_diff_norm_sq(a, b, s2, s1);
  const double ref = reference::components_norm_sq(b, s2, s1);
  return std::sqrt(diff / std::max(ref, 1e-300));
}

}  // namespace

TEST_CASE("eigen_decompose_psd invariants") {
  Rng rng(5);
  Eigen::MatrixXd a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = rng.uniform_pm();
  Eigen::MatrixXd sym = a * a.transpose();
  const EigenSystem eig = eigen_decompose_psd(sym);
  CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  const Eigen::MatrixXd rebuilt =
      eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((rebuilt - sym).cwiseAbs().maxCoeff() < 1e-10 * sym.cwiseAbs().maxCoeff());
  for (int k = 1; k < 8; ++k) CHECK(eig.values(k) <= eig.values(k - 1));
  CHECK(eig.values.minCoeff() >= 0.0);
}

TEST_CASE("scalar tikhonov shrinkage at n=1, p=0") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 7);
  auto xs = random_samples(grid1, 1, 3);
  std::vector<FunctionalSample> ys{{grid2, Eigen::VectorXd::Constant(7, 2.0)}};
  const double lambda = 0.3;
  const auto est = fit(xs, ys, 0, lambda, RegularizationFamily::tikhonov());
  CHECK(est.gram.entries(0, 0) == doctest::Approx(1.0));
  CHECK(est.coeff(0, 0) == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-12));
  const auto pred = predict(est, xs[0]);
  for (Eigen::Index t = 0; t < 7; ++t) {
    CHECK(pred.values(t) == doctest::Approx(2.0 / (1.0 + lambda)).epsilon(1e-12));
  }
}

TEST_CASE("tikhonov coefficient matrix solves the regularized system") {
  auto grid = make_grid(0.0, 1.0, 17);
  for (int n : {4, 16, 64}) {
    auto xs = random_samples(grid, n, 17 + static_cast<unsigned>(n));
    const FeatureGram gram = gram_matrix(xs, 2);
    const Eigen::MatrixXd scaled = gram.entries / static_cast<double>(n);
    const EigenSystem eig = eigen_decompose_psd(scaled);
    for (double lambda : {0.01, 0.1, 1.0}) {
      const Eigen::MatrixXd c = apply_filter(eig, RegularizationFamily::tikhonov(), lambda);
      CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::MatrixXd direct =
          (scaled + lambda * Eigen::MatrixXd::Identity(n, n)).inverse();
      CHECK((c - direct).cwiseAbs().maxCoeff() < 1e-10 * direct.cwiseAbs().maxCoeff());
      // contract: C ((1/n)M + lambda I) = I
      const Eigen::MatrixXd probe = c * (scaled + lambda * Eigen::MatrixXd::Identity(n, n));
      CHECK((probe - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("gram eigen-path matches the direct tensor-grid solve") {
  Rng rng(2024);
  for (int inst = 0; inst < 4; ++inst) {
    const int n = 2 + inst % 4;
    const int p = inst % 3;
    auto grid1 = make_grid(0.0, 1.0, 9);
    auto grid2 = make_grid(0.0, 1.0, 9);
    auto xs = random_samples(grid1, n, 100 + static_cast<unsigned>(inst));
    auto ys = random_samples(grid2, n, 200 + static_cast<unsigned>(inst));
    for (double lambda : {0.01, 0.1, 1.0}) {
      const auto est = fit(xs, ys, p, lambda, RegularizationFamily::tikhonov());
      const auto mat = reference::materialize_estimate(est, 1 << 22);
      const auto direct = reference::direct_tikhonov(xs, ys, p, lambda);
      CHECK(relative_gap(mat, direct, grid2, grid1) < 1e-8);
    }
  }
}

TEST_CASE("n=4 p=2 fit matches direct solve at lambda=0.1") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  auto xs = random_samples(grid1, 4, 31);
  auto ys = random_samples(grid2, 4, 32);
  const auto est = fit(xs, ys, 2, 0.1, RegularizationFamily::tikhonov());
  const auto mat = reference::materialize_estimate(est, 1 << 22);
  const auto direct = reference::direct_tikhonov(xs, ys, 2, 0.1);
  CHECK(relative_gap(mat, direct, grid2, grid1) < 1e-8);
}

TEST_CASE("predict equals brute-force tensor quadrature") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 7);
  auto xs = random_samples(grid1, 4, 55);
  auto ys = random_samples(grid2, 4, 56);
  const auto est = fit(xs, ys, 2, 0.05, RegularizationFamily::tikhonov());
  const auto mat = reference::materialize_estimate(est, 1 << 22);
  auto x_new = random_samples(grid1, 1, 57)[0];
  const auto fast = predict(est, x_new);
  const auto brute = reference::apply_components(mat, grid2, grid1, x_new);
  CHECK((fast.values - brute.values).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("noise-free in-span cutoff interpolates") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  const int n = 5;
  auto xs = random_samples(grid1, n, 77);
  // responses generated by a slope in the training feature span:
  // beta = sum_j chi^j (x) w_j -> Y_i = sum_j M_ij-ish functional, realized
  // by applying a fixed mix of training features
  const FeatureGram gram = gram_matrix(xs, 2);
  Eigen::MatrixXd mix(n, grid2->size());
  Rng rng(78);
  Eigen::VectorXd wcoef(n);
  for (int j = 0; j < n; ++j) wcoef(j) = rng.uniform_pm();
  std::vector<FunctionalSample> ys;
  for (int i = 0; i < n; ++i) {
    FunctionalSample y{grid2, Eigen::VectorXd(grid2->size())};
    const double scale = gram.entries.row(i).dot(wcoef);
    for (Eigen::Index t = 0; t < grid2->size(); ++t) {
      y.values(t) = scale * (1.0 + 0.5 * grid2->points(t));
    }
    ys.push_back(std::move(y));
  }
  const EigenSystem eig = eigen_decompose_psd(gram.entries / n);
  double smallest_positive = eig.values(0);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 1e-10 * eig.values(0)) smallest_positive = eig.values(k);
  }
  const double lambda = 0.5 * smallest_positive;
  const auto est = fit(xs, ys, 2, lambda, RegularizationFamily::spectral_cutoff());
  for (int i = 0; i < n; ++i) {
    const auto pred = predict(est, xs[static_cast<std::size_t>(i)]);
    CHECK((pred.values - ys[static_cast<std::size_t>(i)].values).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("training predictions equal the gram identity") {
  auto grid1 = make_grid(0.0, 1.0, 11);
  auto grid2 = make_grid(0.0, 1.0, 9);
  const int n = 6;
  auto xs = random_samples(grid1, n, 91);
  auto ys = random_samples(grid2, n, 92);
  const auto est = fit(xs, ys, 2, 0.2, RegularizationFamily::tikhonov());
  const Eigen::MatrixXd expected =
      est.gram.entries * est.coeff * sample_values(est.responses) / static_cast<double>(n);
  for (int k = 0; k < n; ++k) {
    const auto pred = predict(est, xs[static_cast<std::size_t>(k)]);
    CHECK((pred.values.transpose() - expected.row(k)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cutoff above the top eigenvalue yields the zero estimator") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  auto xs = random_samples(grid1, 4, 13);
  auto ys = random_samples(grid2, 4, 14);
  const FeatureGram gram = gram_matrix(xs, 2);
  const EigenSystem eig = eigen_decompose_psd(gram.entries / 4.0);
  const double lambda = 2.0 * eig.values(0);
  const auto est = fit(xs, ys, 2, lambda, RegularizationFamily::spectral_cutoff());
  CHECK(est.coeff.cwiseAbs().maxCoeff() == 0.0);
  const auto pred = predict(est, xs[0]);
  CHECK(pred.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tikhonov norm shrinks monotonically in lambda") {
  auto grid1 = make_grid(0.0, 1.0, 11);
  auto grid2 = make_grid(0.0, 1.0, 11);
  auto xs = random_samples(grid1, 8, 21);
  auto ys = random_samples(grid2, 8, 22);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : log_grid(1e-4, 1.0, 12)) {
    const auto est = fit(xs, ys, 2, lambda, RegularizationFamily::tikhonov());
    const double norm = std::sqrt(estimate_norm_sq(est));
    CHECK(norm <= prev * (1.0 + 1e-12));
    prev = norm;
  }
}

TEST_CASE("landweber converges to the cutoff solution on in-span data") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  const int n = 4;
  auto xs = random_samples(grid1, n, 61);
  // in-span responses as in the interpolation test
  const FeatureGram gram = gram_matrix(xs, 1);
  Rng rng(62);
  Eigen::VectorXd wcoef(n);
  for (int j = 0; j < n; ++j) wcoef(j) = rng.uniform_pm();
  std::vector<FunctionalSample> ys;
  for (int i = 0; i < n; ++i) {
    FunctionalSample y{grid2, Eigen::VectorXd(grid2->size())};
    const double scale = gram.entries.row(i).dot(wcoef);
    for (Eigen::Index t = 0; t < grid2->size(); ++t) y.values(t) = scale;
    ys.push_back(std::move(y));
  }
  const EigenSystem eig = eigen_decompose_psd(gram.entries / n);
  double smallest_positive = eig.values(0);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 1e-10 * eig.values(0)) smallest_positive = eig.values(k);
  }
  const auto cut =
      fit(xs, ys, 1, 0.5 * smallest_positive, RegularizationFamily::spectral_cutoff());
  const auto lw = fit(xs, ys, 1, 1e-4, RegularizationFamily::landweber());  // t = 10^4
  CHECK(lw.landweber_scale >= 1.0);
  CHECK(lw.landweber_scale == doctest::Approx(std::max(eig.values(0), 1.0)));
  auto x_new = random_samples(grid1, 1, 63)[0];
  const auto pc = predict(cut, x_new);
  const auto pl = predict(lw, x_new);
  CHECK((pc.values - pl.values).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("zero-eigenvalue filter values cannot influence predictions") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  // duplicated inputs force a rank-deficient gram
  auto base = random_samples(grid1, 2, 41);
  std::vector<FunctionalSample> xs{base[0], base[1], base[0]};
  auto ys = random_samples(grid2, 3, 42);
  const double lambda = 0.1;
  const auto est = fit(xs, ys, 1, lambda, RegularizationFamily::tikhonov());

  const FeatureGram gram = gram_matrix(xs, 1);
  const EigenSystem eig = eigen_decompose_psd(gram.entries / 3.0);
  // hand-build C with the null-mode filter value perturbed
  Eigen::VectorXd filtered(3);
  for (int k = 0; k < 3; ++k) {
    filtered(k) = 1.0 / (eig.values(k) + lambda);
    if (eig.values(k) < 1e-12) filtered(k) += 17.0;
  }
  CHECK(eig.values(2) < 1e-12);  // the duplicate collapses one direction
  PolyRegEstimate twisted = est;
  twisted.coeff = eig.vectors * filtered.asDiagonal() * eig.vectors.transpose();
  auto x_new = random_samples(grid1, 1, 43)[0];
  const auto a = predict(est, x_new);
  const auto b = predict(twisted, x_new);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("beta_component shapes and budget") {
  auto grid1 = make_grid(0.0, 1.0, 7);
  auto grid2 = make_grid(0.0, 1.0, 5);
  auto xs = random_samples(grid1, 3, 51);
  auto ys = random_samples(grid2, 3, 52);
  const auto est = fit(xs, ys, 2, 0.1, RegularizationFamily::tikhonov());

  const auto b0 = beta_component(est, 0, 1 << 20);
  CHECK(b0.dims.size() == 1);
  CHECK(b0.data.size() == 5);
  // intercept component: (1/n) sum_{ij} C_ij Y_j(t)
  const Eigen::MatrixXd a = response_mix(est);
  for (Eigen::Index t = 0; t < 5; ++t) {
    CHECK(b0.data(t) == doctest::Approx(a.col(t).sum() / 3.0).epsilon(1e-12));
  }

  const auto b2 = beta_component(est, 2, 1 << 20);
  CHECK(b2.dims.size() == 3);
  CHECK(b2.data.size() == 5 * 7 * 7);
  CHECK_THROWS_AS(beta_component(est, 2, 100), Error);
  CHECK_THROWS_AS(beta_component(est, 3, 1 << 20), Error);
}

TEST_CASE("rank-one beta_component at n=1") {
  auto grid1 = make_grid(0.0, 1.0, 7);
  auto grid2 = make_grid(0.0, 1.0, 5);
  auto xs = random_samples(grid1, 1, 71);
  auto ys = random_samples(grid2, 1, 72);
  const auto est = fit(xs, ys, 1, 0.5, RegularizationFamily::tikhonov());
  const auto b1 = beta_component(est, 1, 1 << 20);
  const double c = est.coeff(0, 0);
  for (Eigen::Index t = 0; t < 5; ++t) {
    for (Eigen::Index s = 0; s < 7; ++s) {
      CHECK(b1.data(t * 7 + s) ==
            doctest::Approx(c * ys[0].values(t) * xs[0].values(s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("l=2 block norm agrees between grid and gram algebra") {
  auto grid1 = make_grid(0.0, 1.0, 9);
  auto grid2 = make_grid(0.0, 1.0, 9);
  auto xs = random_samples(grid1, 3, 81);
  auto ys = random_samples(grid2, 3, 82);
  const auto est = fit(xs, ys, 2, 0.05, RegularizationFamily::tikhonov());

  const auto b2 = beta_component(est, 2, 1 << 22);
  const Eigen::VectorXd tw = reference::tensor_weights(grid1, 2);
  double grid_norm_sq = 0.0;
  const Eigen::Index block = tw.size();
  for (Eigen::Index t = 0; t < grid2->size(); ++t) {
    grid_norm_sq += grid2->weights(t) *
                    (tw.array() * b2.data.segment(t * block, block).array().square()).sum();
  }

  // gram algebra for the l=2 block: plain inner products to the power 2
  const Eigen::MatrixXd a = response_mix(est);
  const Eigen::MatrixXd resp_inner =
      a * grid2->weights.asDiagonal() * a.transpose();
  double gram_norm_sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double inner = l2_inner(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]);
      gram_norm_sq += resp_inner(i, j) * inner * inner;
    }
  }
  gram_norm_sq /= 9.0;
  CHECK(grid_norm_sq == doctest::Approx(gram_norm_sq).epsilon(1e-8));
}

TEST_CASE("fit rejects bad input") {
  auto grid1 = make_grid(0.0, 1.0, 5);
  auto grid2 = make_grid(0.0, 1.0, 7);
  auto xs = random_samples(grid1, 2, 1);
  auto ys = random_samples(grid2, 3, 2);
  CHECK_THROWS_AS(fit({}, {}, 1, 0.1, RegularizationFamily::tikhonov()), Error);
  CHECK_THROWS_AS(fit(xs, ys, 1, 0.1, RegularizationFamily::tikhonov()), Error);
  ys.pop_back();
  CHECK_THROWS_AS(fit(xs, ys, 1, 0.0, RegularizationFamily::tikhonov()), Error);
  // an input living on the response grid must be rejected
  CHECK_THROWS_AS(predict(fit(xs, ys, 1, 0.1, RegularizationFamily::tikhonov()),
                          FunctionalSample{grid2, Eigen::VectorXd::Ones(7)}),
                  Error);
}
