#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "fofpoly/index_function.hpp"

namespace fofpoly {

// Binary codebook with pairwise Hamming distance > M/8, containing the
// all-zero word; count() - 1 is the usable hypothesis count N.
struct Codebook {
  int M = 0;
  std::vector<std::vector<std::uint8_t>> words;
  int min_pairwise_distance = 0;

  int count() const { return static_cast<int>(words.size()); }
};

int hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

// Greedy construction: exhaustive over all 2^M words in seeded order for
// M <= 16, randomized with up to 10^6 candidate draws above.  Fails with
// search-failure (reporting the achieved count) if fewer than 2^{M/8} + 1
// words are found.  M must lie in [8, 64].
Codebook vg_codebook(int M, std::uint64_t seed);

// mu_m = b0 * m^{-b}, m = 1..count
Eigen::VectorXd power_spectrum(double b0, double b, int count);

// Separated hypothesis family over spectrum modes M+1..2M: the member for
// word theta carries coefficient eps theta_k M^{-1/2} mu_{k+M}^{-s} on mode
// k+M, so that the s-weighted separation reduces to Hamming distance exactly.
struct HypothesisFamily {
  double epsilon = 0.0;
  double s = 0.0;
  int M = 0;
  Eigen::VectorXd spectrum_tail;   // mu_{M+1} .. mu_{2M}
  Eigen::MatrixXd coefficients;    // count x M
  Eigen::VectorXd g_norms;         // ||g_theta|| per member
  std::vector<std::vector<std::uint8_t>> words;

  int count() const { return static_cast<int>(words.size()); }
};

// largest eps keeping every member's pre-image norm within the radius
double max_admissible_epsilon(std::span<const double> spectrum, const IndexFunction& phi,
                              double radius, int M, double s, const Codebook& codebook);

HypothesisFamily hypothesis_family(std::span<const double> spectrum, const IndexFunction& phi,
                                   double radius, double epsilon, int M, double s,
                                   const Codebook& codebook);

double member_snorm(const HypothesisFamily& family, int i);

struct SeparationReport {
  double min_separation_sq = 0.0;
  double threshold_sq = 0.0;  // eps^2 / 8
  bool pass = false;
  int pairs = 0;
};

SeparationReport separation_check(const HypothesisFamily& family);

// (n / 2 sigma2) sum_k eps^2 (theta^i_k - theta^j_k)^2 mu_{k+M}^{1-2s} / M
double kl_divergence(const HypothesisFamily& family, int i, int j, double n, double sigma2);

// (sqrt(N)/(1+sqrt(N))) (1 - 2u - sqrt(2u / log N)); needs N > 2, u in (0, 1/8)
double tsybakov_bound(double N, double u);

// The constants chain fixing eps for a wanted codeword length M over the
// synthetic spectrum b0 m^{-b}: picks the sample count n whose balanced
// regularization level lambda* = psi^{-1}(n^{-1/2}) implies at least M
// usable modes, then eps = c0 R phi(lambda*) lambda*^s with c0 = sqrt(u) c0~
// and c0~ sized so the KL budget closes.
struct ProofPlan {
  int M = 0;
  double c1 = 0.0;
  double c0_tilde = 0.0;
  double c0 = 0.0;
  double n = 0.0;  // implied sample count (may be astronomically large)
  double lambda_star = 0.0;
  double epsilon = 0.0;
  int implied_M = 0;
};

ProofPlan proof_epsilon(double b0, double b, const IndexFunction& phi, double radius, double s,
                        double u, double sigma2, int M);

}  // namespace fofpoly
