#include "fofpoly/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fofpoly/estimator.hpp"
#include "fofpoly/rng.hpp"
#include "fofpoly/stats.hpp"

namespace fofpoly {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kEigenvalueCutoff = 1e-12;
}  // namespace

double process_scale(const ProcessSpec& spec) {
  require(spec.modes >= 1, errc::invalid_argument, "process: need at least one mode");
  require(spec.decay > 0.0 && spec.bound > 0.0, errc::invalid_argument,
          "process: decay and bound must be positive");
  double sum = 0.0;
  for (int k = 1; k <= spec.modes; ++k) sum += std::pow(static_cast<double>(k), -spec.decay);
  return std::sqrt(spec.bound / (3.0 * sum));
}

FunctionalSample draw_process(const ProcessSpec& spec, const GridPtr& grid, std::uint64_t seed) {
  const double c = process_scale(spec);
  Rng rng(seed);
  FunctionalSample out{grid, Eigen::VectorXd::Zero(grid->size())};
  for (int k = 1; k <= spec.modes; ++k) {
    const double xi = kSqrt3 * rng.uniform_pm();
    const double amp = xi * c * std::pow(static_cast<double>(k), -0.5 * spec.decay);
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
      out.values(i) += amp * cosine_basis(k, grid->points(i), grid->lo, grid->hi);
    }
  }
  return out;
}

OracleModel build_oracle(const ProcessSpec& spec, const GridPtr& grid, int n_samples, int degree,
                         std::uint64_t seed) {
  require(n_samples >= 100, errc::invalid_argument, "build_oracle: need at least 100 samples");
  OracleModel oracle;
  oracle.degree = degree;
  oracle.inputs.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    oracle.inputs.push_back(draw_process(spec, grid, mix_seed(seed, 0x0A11, i)));
  }
  oracle.gram = gram_matrix(oracle.inputs, degree);
  const EigenSystem eig =
      eigen_decompose_psd(oracle.gram.entries / static_cast<double>(n_samples));

  Eigen::Index rank = 0;
  const double cutoff = kEigenvalueCutoff * eig.values(0);
  while (rank < eig.values.size() && eig.values(rank) > cutoff) ++rank;
  require(rank >= 5, errc::degenerate_oracle, "build_oracle: spectrum rank below 5");
  oracle.eigenvalues = eig.values.head(rank);
  oracle.weights = eig.vectors.leftCols(rank);

  // decay exponent from the mid-spectrum; head is intercept-dominated and the
  // tail is round-off territory
  const int lo = 3;
  const int hi = std::min<int>(50, static_cast<int>(rank / 2));
  if (hi - lo + 1 >= 2) {
    std::vector<double> xs, ys;
    for (int m = lo; m <= hi; ++m) {
      xs.push_back(std::log(static_cast<double>(m)));
      ys.push_back(std::log(oracle.eigenvalues(m - 1)));
    }
    oracle.decay_hat = -fit_line(xs, ys).slope;
  } else {
    oracle.decay_hat = std::numeric_limits<double>::quiet_NaN();
  }
  return oracle;
}

TargetSpec make_target(const OracleModel& oracle, const IndexFunction& phi, double radius,
                       int n_modes, std::uint64_t seed) {
  require(n_modes >= 1, errc::invalid_argument, "make_target: need at least one mode");
  require(n_modes <= oracle.rank(), errc::invalid_argument,
          "make_target: more modes than the oracle rank");
  require(radius > 0.0, errc::invalid_argument, "make_target: radius must be positive");
  TargetSpec target;
  target.phi = phi;
  target.radius = radius;
  Rng rng(mix_seed(seed, 0x7A46));
  double norm_sq = 0.0;
  for (int m = 0; m < n_modes; ++m) {
    for (int k = 1; k <= 3; ++k) {
      const double v = rng.uniform_pm();
      target.coeffs.push_back({m, k, v});
      norm_sq += v * v;
    }
  }
  const double scale = radius / std::sqrt(norm_sq);
  for (auto& c : target.coeffs) c.v *= scale;
  return target;
}

double target_norm_sq(const TargetSpec& target, const OracleModel& oracle) {
  double acc = 0.0;
  for (const auto& c : target.coeffs) {
    const double coeff = target.phi(oracle.eigenvalues(c.m)) * c.v;
    acc += coeff * coeff;
  }
  return acc;
}

std::vector<int> target_mode_ids(const TargetSpec& target) {
  std::set<int> ids;
  for (const auto& c : target.coeffs) ids.insert(c.m);
  return {ids.begin(), ids.end()};
}

Eigen::MatrixXd oracle_mode_coords(const OracleModel& oracle,
                                   const std::vector<FunctionalSample>& xs,
                                   const std::vector<int>& mode_ids) {
  const Eigen::MatrixXd cross = cross_feature_gram(xs, oracle.inputs, oracle.degree);
  const double n_oracle = static_cast<double>(oracle.sample_count());
  Eigen::MatrixXd coords(cross.rows(), static_cast<Eigen::Index>(mode_ids.size()));
  for (std::size_t j = 0; j < mode_ids.size(); ++j) {
    const int m = mode_ids[j];
    require(m >= 0 && m < oracle.rank(), errc::invalid_argument,
            "oracle_mode_coords: mode outside the oracle rank");
    const double scale = 1.0 / std::sqrt(n_oracle * oracle.eigenvalues(m));
    coords.col(static_cast<Eigen::Index>(j)) = scale * (cross * oracle.weights.col(m));
  }
  return coords;
}

std::vector<FunctionalSample> clean_responses(const OracleModel& oracle, const TargetSpec& target,
                                              const std::vector<FunctionalSample>& xs,
                                              const GridPtr& grid_s2) {
  const std::vector<int> modes = target_mode_ids(target);
  const Eigen::MatrixXd coords = oracle_mode_coords(oracle, xs, modes);
  const Eigen::Index n = coords.rows();
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, grid_s2->size());
  for (const auto& c : target.coeffs) {
    const auto mode_pos = std::lower_bound(modes.begin(), modes.end(), c.m) - modes.begin();
    const double weight = target.phi(oracle.eigenvalues(c.m)) * c.v;
    const FunctionalSample basis = basis_sample(grid_s2, c.k);
    values.noalias() +=
        (weight * coords.col(mode_pos)) * basis.values.transpose();
  }
  std::vector<FunctionalSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.push_back({grid_s2, values.row(i).transpose()});
  }
  return out;
}

FunctionalSample draw_noise(const NoiseSpec& noise, const GridPtr& grid, std::uint64_t seed) {
  require(noise.sigma2 >= 0.0, errc::invalid_argument, "noise: sigma2 must be non-negative");
  require(noise.modes >= 1, errc::invalid_argument, "noise: need at least one mode");
  FunctionalSample out{grid, Eigen::VectorXd::Zero(grid->size())};
  if (noise.sigma2 == 0.0) return out;
  Rng rng(seed);
  const double mode_sd = std::sqrt(noise.sigma2 / noise.modes);
  for (int k = 1; k <= noise.modes; ++k) {
    const double eta = mode_sd * rng.gaussian();
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
      out.values(i) += eta * cosine_basis(k, grid->points(i), grid->lo, grid->hi);
    }
  }
  return out;
}

Dataset gen_dataset(const OracleModel& oracle, const TargetSpec& target, const ProcessSpec& spec,
                    const NoiseSpec& noise, int n, const GridPtr& grid_s2, std::uint64_t seed) {
  require(n >= 1, errc::invalid_argument, "gen_dataset: need at least one sample");
  const GridPtr& grid_s1 = oracle.inputs.front().grid;
  Dataset data;
  data.inputs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    data.inputs.push_back(draw_process(spec, grid_s1, mix_seed(seed, 0x01, i)));
  }
  data.responses = clean_responses(oracle, target, data.inputs, grid_s2);
  for (int i = 0; i < n; ++i) {
    const FunctionalSample eps = draw_noise(noise, grid_s2, mix_seed(seed, 0x02, i));
    data.responses[static_cast<std::size_t>(i)].values += eps.values;
  }
  return data;
}

}  // namespace fofpoly
