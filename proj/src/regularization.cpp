#include "fofpoly/regularization.hpp"

#include <cmath>
#include <limits>

namespace fofpoly {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSigmaFloor = 1e-12;
constexpr double kQualificationPassConstant = 10.0;
}  // namespace

RegularizationFamily RegularizationFamily::spectral_cutoff() {
  return {FilterKind::SpectralCutoff, 1.0, 2.0, 1.0, kInf};
}

RegularizationFamily RegularizationFamily::tikhonov() {
  return {FilterKind::Tikhonov, 1.0, 2.0, 1.0, 1.0};
}

RegularizationFamily RegularizationFamily::landweber() {
  return {FilterKind::Landweber, 1.0, 2.0, 1.0, kInf};
}

RegularizationFamily RegularizationFamily::from_name(const std::string& name) {
  if (name == "cutoff") return spectral_cutoff();
  if (name == "tikhonov") return tikhonov();
  if (name == "landweber") return landweber();
  fail(errc::invalid_argument, "unknown regularization family '" + name + "'");
}

const char* RegularizationFamily::name() const {
  switch (kind) {
    case FilterKind::SpectralCutoff: return "cutoff";
    case FilterKind::Tikhonov: return "tikhonov";
    case FilterKind::Landweber: return "landweber";
  }
  return "?";
}

long landweber_iterations(double lambda) {
  require(lambda > 0.0, errc::invalid_argument, "landweber_iterations: lambda must be positive");
  require(lambda >= 1e-9, errc::resource_limit, "landweber_iterations: lambda too small");
  return static_cast<long>(std::ceil(1.0 / lambda));
}

double g_apply(const RegularizationFamily& family, double lambda, double sigma) {
  require(lambda > 0.0, errc::invalid_argument, "g_apply: lambda must be positive");
  require(sigma >= 0.0, errc::domain_error, "g_apply: sigma must be non-negative");
  switch (family.kind) {
    case FilterKind::SpectralCutoff:
      return sigma >= lambda ? 1.0 / sigma : 0.0;
    case FilterKind::Tikhonov:
      return 1.0 / (sigma + lambda);
    case FilterKind::Landweber: {
      require(sigma <= 1.0, errc::domain_error, "g_apply: landweber needs sigma <= 1");
      const long t = landweber_iterations(lambda);
      if (sigma <= kSigmaFloor) return static_cast<double>(t);
      return (1.0 - std::pow(1.0 - sigma, static_cast<double>(t))) / sigma;
    }
  }
  fail(errc::invalid_argument, "g_apply: unknown family");
}

double residual(const RegularizationFamily& family, double lambda, double sigma) {
  require(lambda > 0.0, errc::invalid_argument, "residual: lambda must be positive");
  require(sigma >= 0.0, errc::domain_error, "residual: sigma must be non-negative");
  switch (family.kind) {
    case FilterKind::SpectralCutoff:
      return sigma >= lambda ? 0.0 : 1.0;
    case FilterKind::Tikhonov:
      return lambda / (sigma + lambda);
    case FilterKind::Landweber: {
      require(sigma <= 1.0, errc::domain_error, "residual: landweber needs sigma <= 1");
      const long t = landweber_iterations(lambda);
      return std::pow(1.0 - sigma, static_cast<double>(t));
    }
  }
  fail(errc::invalid_argument, "residual: unknown family");
}

FamilyCheckReport check_family(const RegularizationFamily& family,
                               std::span<const double> sigma_grid,
                               std::span<const double> lambda_grid,
                               std::span<const double> exponents, double eta) {
  require(!sigma_grid.empty() && !lambda_grid.empty(), errc::invalid_argument,
          "check_family: empty grid");
  for (double s : sigma_grid) {
    require(s > 0.0 && s <= eta, errc::invalid_argument, "check_family: sigma outside (0, eta]");
  }
  for (double l : lambda_grid) {
    require(l > 0.0 && l <= eta, errc::invalid_argument, "check_family: lambda outside (0, eta]");
  }

  FamilyCheckReport report;
  report.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
  report.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  for (double q : exponents) report.qualification_pass[q] = true;

  for (double lambda : lambda_grid) {
    std::map<double, double> ratio;  // q -> sup_sigma |r| sigma^q / lambda^q
    for (double q : exponents) ratio[q] = 0.0;
    for (double sigma : sigma_grid) {
      const double g = g_apply(family, lambda, sigma);
      const double r = residual(family, lambda, sigma);
      report.measured_A = std::max(report.measured_A, std::abs(sigma * g));
      report.measured_B_lambda_sup = std::max(report.measured_B_lambda_sup, std::abs(lambda * g));
      report.measured_D = std::max(report.measured_D, std::abs(r));
      for (double q : exponents) {
        ratio[q] = std::max(ratio[q], std::abs(r) * std::pow(sigma / lambda, q));
      }
    }
    for (double q : exponents) {
      if (ratio[q] > kQualificationPassConstant) report.qualification_pass[q] = false;
    }
  }
  return report;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  require(count >= 1, errc::invalid_argument, "log_grid: need at least one point");
  require(lo > 0.0 && hi > lo, errc::invalid_argument, "log_grid: need 0 < lo < hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  out.back() = hi;
  return out;
}

}  // namespace fofpoly
