#include "fofpoly/reference.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace fofpoly::reference {

namespace {

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

Eigen::VectorXd tensor_pointwise(const Eigen::VectorXd& v, int l) {
  const Eigen::Index m = v.size();
  const Eigen::Index cells = ipow(m, l);
  Eigen::VectorXd out = Eigen::VectorXd::Ones(cells);
  Eigen::Index repeat = 1;
  for (int r = 0; r < l; ++r) {
    for (Eigen::Index idx = 0; idx < cells; ++idx) {
      out(idx) *= v((idx / repeat) % m);
    }
    repeat *= m;
  }
  return out;
}

}  // namespace

Eigen::VectorXd feature_values(const FunctionalSample& x, int l) {
  require(l >= 0, errc::invalid_argument, "feature_values: negative degree");
  return tensor_pointwise(x.values, l);
}

Eigen::VectorXd tensor_weights(const GridPtr& grid, int l) {
  require(l >= 0, errc::invalid_argument, "tensor_weights: negative degree");
  return tensor_pointwise(grid->weights, l);
}

double brute_feature_inner(const FunctionalSample& x1, const FunctionalSample& x2, int p) {
  require(same_grid(x1.grid, x2.grid), errc::grid_mismatch, "brute_feature_inner: mixed grids");
  double acc = 0.0;
  for (int l = 0; l <= p; ++l) {
    const Eigen::VectorXd f1 = feature_values(x1, l);
    const Eigen::VectorXd f2 = feature_values(x2, l);
    const Eigen::VectorXd tw = tensor_weights(x1.grid, l);
    acc += (tw.array() * f1.array() * f2.array()).sum();
  }
  return acc;
}

double components_norm_sq(const ComponentField& f, const GridPtr& s2, const GridPtr& s1) {
  double acc = 0.0;
  for (std::size_t l = 0; l < f.parts.size(); ++l) {
    const TensorField& part = f.parts[l];
    const Eigen::VectorXd tw = tensor_weights(s1, static_cast<int>(l));
    const Eigen::Index block = tw.size();
    for (Eigen::Index t = 0; t < s2->size(); ++t) {
      acc += s2->weights(t) *
             (tw.array() * part.data.segment(t * block, block).array().square()).sum();
    }
  }
  return acc;
}

double components_diff_norm_sq(const ComponentField& a, const ComponentField& b,
                               const GridPtr& s2, const GridPtr& s1) {
  require(a.parts.size() == b.parts.size(), errc::invalid_argument,
          "components_diff_norm_sq: degree mismatch");
  double acc = 0.0;
  for (std::size_t l = 0; l < a.parts.size(); ++l) {
    const Eigen::VectorXd tw = tensor_weights(s1, static_cast<int>(l));
    const Eigen::Index block = tw.size();
    for (Eigen::Index t = 0; t < s2->size(); ++t) {
      const auto da = a.parts[l].data.segment(t * block, block).array();
      const auto db = b.parts[l].data.segment(t * block, block).array();
      acc += s2->weights(t) * (tw.array() * (da - db).square()).sum();
    }
  }
  return acc;
}

FunctionalSample apply_components(const ComponentField& f, const GridPtr& s2, const GridPtr& s1,
                                  const FunctionalSample& x) {
  FunctionalSample out{s2, Eigen::VectorXd::Zero(s2->size())};
  for (std::size_t l = 0; l < f.parts.size(); ++l) {
    const Eigen::VectorXd feat = feature_values(x, static_cast<int>(l));
    const Eigen::VectorXd tw = tensor_weights(s1, static_cast<int>(l));
    const Eigen::Index block = tw.size();
    for (Eigen::Index t = 0; t < s2->size(); ++t) {
      out.values(t) +=
          (tw.array() * feat.array() * f.parts[l].data.segment(t * block, block).array()).sum();
    }
  }
  return out;
}

ComponentField direct_tikhonov(const std::vector<FunctionalSample>& inputs,
                               const std::vector<FunctionalSample>& responses, int p,
                               double lambda) {
  require(!inputs.empty() && inputs.size() == responses.size(), errc::invalid_argument,
          "direct_tikhonov: bad training set");
  require(lambda > 0.0, errc::invalid_argument, "direct_tikhonov: lambda must be positive");
  const GridPtr& s1 = inputs.front().grid;
  const GridPtr& s2 = responses.front().grid;
  const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());
  const Eigen::Index m1 = s1->size();
  const Eigen::Index m2 = s2->size();

  // concatenated feature-value layout over l = 0..p
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(p) + 2, 0);
  for (int l = 0; l <= p; ++l) offset[static_cast<std::size_t>(l) + 1] =
      offset[static_cast<std::size_t>(l)] + ipow(m1, l);
  const Eigen::Index dim = offset.back();

  Eigen::MatrixXd feats(n, dim);
  Eigen::VectorXd wcat(dim);
  for (int l = 0; l <= p; ++l) {
    wcat.segment(offset[static_cast<std::size_t>(l)], ipow(m1, l)) = tensor_weights(s1, l);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int l = 0; l <= p; ++l) {
      feats.row(i).segment(offset[static_cast<std::size_t>(l)], ipow(m1, l)) =
          feature_values(inputs[static_cast<std::size_t>(i)], l).transpose();
    }
  }

  // value-space normal operator: op = (1/n) sum_i u_i (u_i . w)^T; the
  // response argument is untouched, so one dim x dim solve serves every t
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    op.noalias() += feats.row(i).transpose() * (feats.row(i).array() * wcat.transpose().array()).matrix();
  }
  op /= static_cast<double>(n);
  op.diagonal().array() += lambda;

  const Eigen::MatrixXd yvals = sample_values(responses);           // n x m2
  const Eigen::MatrixXd rhs = (yvals.transpose() * feats) / static_cast<double>(n);  // m2 x dim
  const Eigen::MatrixXd sol = op.partialPivLu().solve(rhs.transpose()).transpose();  // m2 x dim

  ComponentField out;
  out.parts.resize(static_cast<std::size_t>(p) + 1);
  for (int l = 0; l <= p; ++l) {
    TensorField& part = out.parts[static_cast<std::size_t>(l)];
    const Eigen::Index block = ipow(m1, l);
    part.dims.assign(1, m2);
    for (int r = 0; r < l; ++r) part.dims.push_back(m1);
    part.data.resize(m2 * block);
    for (Eigen::Index t = 0; t < m2; ++t) {
      part.data.segment(t * block, block) =
          sol.row(t).segment(offset[static_cast<std::size_t>(l)], block).transpose();
    }
  }
  return out;
}

ComponentField materialize_estimate(const PolyRegEstimate& est, std::int64_t tensor_budget) {
  ComponentField out;
  out.parts.reserve(static_cast<std::size_t>(est.degree) + 1);
  for (int l = 0; l <= est.degree; ++l) {
    out.parts.push_back(beta_component(est, l, tensor_budget));
  }
  return out;
}

}  // namespace fofpoly::reference
