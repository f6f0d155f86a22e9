#include "fofpoly/minimax.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "fofpoly/metrics.hpp"
#include "fofpoly/rng.hpp"

namespace fofpoly {

namespace {

std::vector<std::uint8_t> unpack(std::uint64_t word, int M) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) bits[static_cast<std::size_t>(k)] = (word >> k) & 1u;
  return bits;
}

}  // namespace

int hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  require(a.size() == b.size(), errc::invalid_argument, "hamming: length mismatch");
  int d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int diff = static_cast<int>(a[k]) - static_cast<int>(b[k]);
    d += diff * diff;
  }
  return d;
}

Codebook vg_codebook(int M, std::uint64_t seed) {
  require(M >= 8, errc::invalid_argument, "vg_codebook: need M >= 8");
  require(M <= 64, errc::invalid_argument, "vg_codebook: M above 64 not supported");
  const int min_distance = M / 8 + 1;  // strict "> M/8" as an integer bound
  const int required =
      static_cast<int>(std::ceil(std::pow(2.0, static_cast<double>(M) / 8.0))) + 1;
  // pairwise sweeps downstream are quadratic in the word count, so stop the
  // scan well past the required size instead of packing the whole space
  const std::size_t cap = static_cast<std::size_t>(std::max(required, 512));

  std::vector<std::uint64_t> kept;
  kept.push_back(0);  // the all-zero word anchors the family
  auto admissible = [&](std::uint64_t cand) {
    for (std::uint64_t w : kept) {
      if (std::popcount(cand ^ w) < min_distance) return false;
    }
    return true;
  };

  Rng rng(mix_seed(seed, 0xC0DE));
  if (M <= 16) {
    // exhaustive greedy in seeded random order
    std::vector<std::uint64_t> order(1ull << M);
    std::iota(order.begin(), order.end(), 0ull);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform01() * (i + 1));
      std::swap(order[i], order[std::min(j, i)]);
    }
    for (std::uint64_t cand : order) {
      if (kept.size() >= cap) break;
      if (cand != 0 && admissible(cand)) kept.push_back(cand);
    }
  } else {
    const std::uint64_t mask = (M == 64) ? ~0ull : ((1ull << M) - 1);
    for (int draw = 0; draw < 1'000'000 && kept.size() < cap; ++draw) {
      const std::uint64_t cand = rng.next() & mask;
      if (cand != 0 && admissible(cand)) kept.push_back(cand);
    }
  }

  if (static_cast<int>(kept.size()) < required) {
    fail(errc::search_failure, "vg_codebook: reached only " + std::to_string(kept.size()) +
                                   " words of " + std::to_string(required));
  }

  Codebook book;
  book.M = M;
  book.words.reserve(kept.size());
  for (std::uint64_t w : kept) book.words.push_back(unpack(w, M));
  book.min_pairwise_distance = M + 1;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      book.min_pairwise_distance =
          std::min(book.min_pairwise_distance, std::popcount(kept[i] ^ kept[j]));
    }
  }
  require(book.min_pairwise_distance >= min_distance, errc::construction_bug,
          "vg_codebook: greedy produced too-close words");
  return book;
}

Eigen::VectorXd power_spectrum(double b0, double b, int count) {
  require(b0 > 0.0 && b > 0.0 && count >= 1, errc::invalid_argument,
          "power_spectrum: bad parameters");
  Eigen::VectorXd mu(count);
  for (int m = 1; m <= count; ++m) {
    mu(m - 1) = b0 * std::pow(static_cast<double>(m), -b);
  }
  return mu;
}

namespace {

// sum_k theta_k / (M phi(mu_{k+M})^2 mu_{k+M}^{2s}) -- the pre-image weight
double g_weight(std::span<const double> spectrum, const IndexFunction& phi, int M, double s,
                const std::vector<std::uint8_t>& word) {
  double acc = 0.0;
  for (int k = 1; k <= M; ++k) {
    if (!word[static_cast<std::size_t>(k - 1)]) continue;
    const double mu = spectrum[static_cast<std::size_t>(k + M - 1)];
    const double denom = phi(mu) * std::pow(mu, s);
    acc += 1.0 / (static_cast<double>(M) * denom * denom);
  }
  return acc;
}

}  // namespace

double max_admissible_epsilon(std::span<const double> spectrum, const IndexFunction& phi,
                              double radius, int M, double s, const Codebook& codebook) {
  require(spectrum.size() >= static_cast<std::size_t>(2 * M), errc::invalid_argument,
          "need spectrum through mode 2M");
  double worst = 0.0;
  for (const auto& word : codebook.words) {
    worst = std::max(worst, g_weight(spectrum, phi, M, s, word));
  }
  require(worst > 0.0, errc::invalid_argument, "codebook has no non-zero word");
  return radius / std::sqrt(worst);
}

HypothesisFamily hypothesis_family(std::span<const double> spectrum, const IndexFunction& phi,
                                   double radius, double epsilon, int M, double s,
                                   const Codebook& codebook) {
  require(spectrum.size() >= static_cast<std::size_t>(2 * M), errc::invalid_argument,
          "need spectrum through mode 2M");
  require(codebook.M == M, errc::invalid_argument, "codebook length differs from M");
  require(epsilon > 0.0, errc::invalid_argument, "epsilon must be positive");
  require(s >= 0.0 && s <= 0.5, errc::invalid_argument, "s must lie in [0, 1/2]");

  HypothesisFamily family;
  family.epsilon = epsilon;
  family.s = s;
  family.M = M;
  family.words = codebook.words;
  family.spectrum_tail.resize(M);
  for (int k = 1; k <= M; ++k) {
    family.spectrum_tail(k - 1) = spectrum[static_cast<std::size_t>(k + M - 1)];
  }

  const int count = codebook.count();
  family.coefficients.resize(count, M);
  family.g_norms.resize(count);
  const double root_m = std::sqrt(static_cast<double>(M));
  for (int i = 0; i < count; ++i) {
    const auto& word = codebook.words[static_cast<std::size_t>(i)];
    for (int k = 1; k <= M; ++k) {
      const double mu = family.spectrum_tail(k - 1);
      family.coefficients(i, k - 1) =
          word[static_cast<std::size_t>(k - 1)] ? epsilon / (root_m * std::pow(mu, s)) : 0.0;
    }
    family.g_norms(i) = epsilon * std::sqrt(g_weight(spectrum, phi, M, s, word));
    if (family.g_norms(i) > radius * (1.0 + 1e-12)) {
      const double cap = max_admissible_epsilon(spectrum, phi, radius, M, s, codebook);
      fail(errc::epsilon_too_large,
           "member pre-image norm exceeds the radius; max admissible epsilon is " +
               std::to_string(cap));
    }
  }
  return family;
}

double member_snorm(const HypothesisFamily& family, int i) {
  require(i >= 0 && i < family.count(), errc::invalid_argument, "member index out of range");
  double acc = 0.0;
  for (int k = 0; k < family.M; ++k) {
    const double weighted =
        family.coefficients(i, k) * std::pow(family.spectrum_tail(k), family.s);
    acc += weighted * weighted;
  }
  return std::sqrt(acc);
}

SeparationReport separation_check(const HypothesisFamily& family) {
  SeparationReport report;
  report.threshold_sq = family.epsilon * family.epsilon / 8.0;
  report.min_separation_sq = std::numeric_limits<double>::infinity();
  const int count = family.count();
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      double sep = 0.0;
      for (int k = 0; k < family.M; ++k) {
        const double diff = (family.coefficients(i, k) - family.coefficients(j, k)) *
                            std::pow(family.spectrum_tail(k), family.s);
        sep += diff * diff;
      }
      report.min_separation_sq = std::min(report.min_separation_sq, sep);
      ++report.pairs;
    }
  }
  report.pass = report.min_separation_sq >= report.threshold_sq * (1.0 - 1e-12);
  require(report.pass, errc::construction_bug,
          "separation below eps^2/8 despite the codebook invariant");
  return report;
}

double kl_divergence(const HypothesisFamily& family, int i, int j, double n, double sigma2) {
  require(sigma2 > 0.0, errc::invalid_argument, "kl_divergence: sigma2 must be positive");
  require(i >= 0 && i < family.count() && j >= 0 && j < family.count(), errc::invalid_argument,
          "kl_divergence: member index out of range");
  const auto& wi = family.words[static_cast<std::size_t>(i)];
  const auto& wj = family.words[static_cast<std::size_t>(j)];
  double acc = 0.0;
  for (int k = 0; k < family.M; ++k) {
    const double diff =
        static_cast<double>(wi[static_cast<std::size_t>(k)]) - static_cast<double>(wj[static_cast<std::size_t>(k)]);
    acc += diff * diff * std::pow(family.spectrum_tail(k), 1.0 - 2.0 * family.s);
  }
  return n * family.epsilon * family.epsilon * acc / (2.0 * sigma2 * family.M);
}

double tsybakov_bound(double N, double u) {
  require(N > 2.0, errc::invalid_argument, "tsybakov_bound: need N > 2");
  require(u > 0.0 && u < 0.125, errc::invalid_argument, "tsybakov_bound: need u in (0, 1/8)");
  const double root = std::sqrt(N);
  return (root / (1.0 + root)) * (1.0 - 2.0 * u - std::sqrt(2.0 * u / std::log(N)));
}

ProofPlan proof_epsilon(double b0, double b, const IndexFunction& phi, double radius, double s,
                        double u, double sigma2, int M) {
  require(b0 > 0.0 && b > 1.0, errc::invalid_argument, "proof_epsilon: need b0 > 0, b > 1");
  require(u > 0.0 && u < 0.125, errc::invalid_argument, "proof_epsilon: need u in (0, 1/8)");
  require(sigma2 > 0.0 && radius > 0.0, errc::invalid_argument,
          "proof_epsilon: sigma2 and radius must be positive");
  require(M >= 1, errc::invalid_argument, "proof_epsilon: need M >= 1");

  ProofPlan plan;
  plan.M = M;
  const double tail_exp = b * (1.0 - 2.0 * s) + 1.0;
  plan.c1 = std::pow(4.0, tail_exp) * std::pow(b0, 1.0 - 2.0 * s) /
            (2.0 * sigma2 * std::pow(b0, tail_exp / b));
  plan.c0_tilde = std::sqrt(std::log(2.0) / (8.0 * plan.c1));
  plan.c0 = std::min(std::sqrt(u) * plan.c0_tilde, 1.0);

  const double lambda_target = b0 * std::pow(2.0 * static_cast<double>(M), -b);
  const double psi_exponent = 0.5 + 0.5 / b;
  const auto psi = [&](double x) { return phi(x) * std::pow(x, psi_exponent); };
  // small inflation keeps lambda* strictly below the target so the implied
  // mode count does not fall off the floor boundary at exact powers
  plan.n = std::ceil((1.0 + 1e-6) / (psi(lambda_target) * psi(lambda_target)));
  plan.lambda_star = theoretical_lambda(plan.n, phi, b);
  const double h = phi(plan.lambda_star) * std::pow(plan.lambda_star, s);
  plan.epsilon = plan.c0 * radius * h;
  plan.implied_M =
      static_cast<int>(std::floor(0.5 * std::pow(b0 / plan.lambda_star, 1.0 / b)));
  return plan;
}

}  // namespace fofpoly
