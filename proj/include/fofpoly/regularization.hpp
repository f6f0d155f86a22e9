#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fofpoly/errors.hpp"

namespace fofpoly {

// Spectral filter families g_lambda approximating sigma -> 1/sigma on (0, eta],
// together with their residuals r_lambda(sigma) = 1 - sigma g_lambda(sigma).
//
//   cutoff     g = 1/sigma above the threshold, 0 below
//   tikhonov   g = 1/(sigma + lambda)
//   landweber  g_t = sum_{i=0}^{t-1} (1-sigma)^i with t = ceil(1/lambda);
//              requires sigma pre-scaled into [0, 1]
enum class FilterKind { SpectralCutoff, Tikhonov, Landweber };

struct RegularizationFamily {
  FilterKind kind = FilterKind::Tikhonov;
  double declared_A = 1.0;  // bound on sigma |g|
  double declared_B = 2.0;  // bound on lambda |g|
  double declared_D = 1.0;  // bound on |r|
  double qualification = 1.0;

  static RegularizationFamily spectral_cutoff();
  static RegularizationFamily tikhonov();
  static RegularizationFamily landweber();
  // accepts "cutoff" | "tikhonov" | "landweber"
  static RegularizationFamily from_name(const std::string& name);
  const char* name() const;
};

// ceil(1/lambda), the iteration count identified with lambda
long landweber_iterations(double lambda);

double g_apply(const RegularizationFamily& family, double lambda, double sigma);
double residual(const RegularizationFamily& family, double lambda, double sigma);

struct FamilyCheckReport {
  double measured_A = 0.0;             // sup sigma |g|
  double measured_B_lambda_sup = 0.0;  // sup lambda |g|
  double measured_D = 0.0;             // sup |r|
  // exponent q -> whether sup_sigma |r| sigma^q / lambda^q stays below the
  // pass constant over the whole lambda grid
  std::map<double, bool> qualification_pass;
  std::vector<double> sigma_grid;
  std::vector<double> lambda_grid;
};

// Numerical verification of the defining filter properties on finite grids.
// All grid values must lie in (0, eta].  The qualification check uses a fixed
// pass constant of 10 since the defining inequality is only existential.
FamilyCheckReport check_family(const RegularizationFamily& family,
                               std::span<const double> sigma_grid,
                               std::span<const double> lambda_grid,
                               std::span<const double> exponents, double eta = 1.0);

std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace fofpoly
