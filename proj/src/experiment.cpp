#include "fofpoly/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "fofpoly/io.hpp"
#include "fofpoly/metrics.hpp"
#include "fofpoly/minimax.hpp"
#include "fofpoly/reference.hpp"
#include "fofpoly/rng.hpp"
#include "fofpoly/stats.hpp"
#include "fofpoly/svg.hpp"

namespace fofpoly {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    require(allowed.count(key) > 0, errc::config_error,
            "unknown key '" + key + "' in " + where);
  }
}

GridConfig parse_grid(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"lo", "hi", "points"}, where);
  GridConfig g;
  g.lo = j.value("lo", 0.0);
  g.hi = j.value("hi", 1.0);
  g.points = j.value("points", 64);
  require(g.lo < g.hi, errc::config_error, where + ": needs lo < hi");
  require(g.points >= 2 && g.points <= 100000, errc::config_error,
          where + ": points outside [2, 100000]");
  return g;
}

ScanGrid parse_scan(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"lo", "hi", "points"}, where);
  ScanGrid g;
  g.lo = j.at("lo").get<double>();
  g.hi = j.at("hi").get<double>();
  g.points = j.at("points").get<int>();
  require(g.lo > 0.0 && g.lo < g.hi, errc::config_error, where + ": needs 0 < lo < hi");
  require(g.points >= 1 && g.points <= 1000000, errc::config_error, where + ": bad point count");
  return g;
}

std::filesystem::path out_path(const ExperimentConfig& config, const std::string& file) {
  std::filesystem::create_directories(config.output_dir);
  return std::filesystem::path(config.output_dir) / file;
}

void write_report(const ExperimentConfig& config, const ordered_json& report) {
  std::ofstream out(out_path(config, "report.json"), std::ios::binary);
  require(out.good(), errc::io_error, "cannot write report.json");
  out << report.dump(2) << '\n';
}

int thread_count(const ExperimentConfig& config, std::size_t jobs) {
  int k = config.threads > 0 ? config.threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (k < 1) k = 1;
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), jobs));
}

// Fan a fixed job list out to a pool; results land in caller-indexed slots so
// aggregation order never depends on scheduling.
void run_jobs(int threads, std::size_t count, const std::function<void(std::size_t)>& job) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          job(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / (static_cast<double>(values.size()) - 1.0));
}

// ---------------------------------------------------------------- rate-sweep

struct ReplicateResult {
  double estimation = 0.0;
  double prediction = 0.0;
  double lambda = 0.0;
};

int run_rate_sweep(const ExperimentConfig& config) {
  require(!config.n_values.empty(), errc::config_error, "rate-sweep: empty n list");
  const auto grid1 = make_grid(config.grid_s1.lo, config.grid_s1.hi, config.grid_s1.points);
  const auto grid2 = make_grid(config.grid_s2.lo, config.grid_s2.hi, config.grid_s2.points);
  const RegularizationFamily family = RegularizationFamily::from_name(config.family);
  const IndexFunction phi = IndexFunction::holder(config.target_r);

  std::fprintf(stderr, "[rate-sweep] building oracle (N=%d, p=%d)\n", config.oracle_samples,
               config.degree);
  const OracleModel oracle =
      build_oracle(config.process, grid1, config.oracle_samples, config.degree,
                   mix_seed(config.seed, 0x0AC1E));
  const double b_hat = oracle.decay_hat;
  require(std::isfinite(b_hat) && b_hat > 1.0, errc::degenerate_oracle,
          "rate-sweep: fitted spectral decay must exceed 1");
  const TargetSpec target = make_target(oracle, phi, config.target_radius, config.target_modes,
                                        mix_seed(config.seed, 0x7A26E7));
  std::fprintf(stderr, "[rate-sweep] b_hat=%.3f rank=%td\n", b_hat,
               static_cast<std::ptrdiff_t>(oracle.rank()));

  std::vector<double> theo_lambda(config.n_values.size(), 0.0);
  if (config.lambda_rule.type == LambdaRule::Type::Theoretical) {
    for (std::size_t i = 0; i < config.n_values.size(); ++i) {
      theo_lambda[i] = theoretical_lambda(static_cast<double>(config.n_values[i]), phi, b_hat);
    }
  }

  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  const std::size_t jobs = config.n_values.size() * reps;
  std::vector<ReplicateResult> results(jobs);

  auto job = [&](std::size_t idx) {
    const std::size_t n_idx = idx / reps;
    const int rep = static_cast<int>(idx % reps);
    const int n = config.n_values[n_idx];
    const std::uint64_t seed_rep = mix_seed(config.seed, static_cast<std::uint64_t>(n), rep);
    const Dataset data =
        gen_dataset(oracle, target, config.process, config.noise, n, grid2, seed_rep);

    const ErrorContext context = make_error_context(oracle, target, data.inputs);
    PolyRegEstimate est;
    double lambda_used = 0.0;
    if (config.lambda_rule.type == LambdaRule::Type::Theoretical) {
      lambda_used = theo_lambda[n_idx];
      est = fit(data.inputs, data.responses, config.degree, lambda_used, family);
    } else {
      // one decomposition and one error context shared across the lambda grid
      const FeatureGram gram = gram_matrix(data.inputs, config.degree);
      const EigenSystem eig = eigen_decompose_psd(gram.entries / static_cast<double>(n));
      const std::vector<double> grid = log_grid(config.lambda_rule.grid_min,
                                                config.lambda_rule.grid_max,
                                                config.lambda_rule.grid_count);
      double best = std::numeric_limits<double>::infinity();
      for (double lambda : grid) {
        PolyRegEstimate cand = fit_from_eigensystem(eig, gram, data.inputs, data.responses,
                                                    config.degree, lambda, family);
        const double err = estimation_error(cand, oracle, target, context).value;
        if (err < best) {
          best = err;
          lambda_used = lambda;
          est = std::move(cand);
        }
      }
    }

    ReplicateResult& slot = results[idx];
    slot.lambda = lambda_used;
    slot.estimation = estimation_error(est, oracle, target, context).value;
    slot.prediction = prediction_error(est, oracle, target, config.process, config.n_test,
                                       mix_seed(seed_rep, 0xFEED))
                          .value;
  };
  run_jobs(thread_count(config, jobs), jobs, job);

  RateReport est_report, pred_report;
  est_report.replicates = pred_report.replicates = config.replicates;
  std::vector<double> lambda_mean(config.n_values.size(), 0.0);
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    std::vector<double> errs0, errs5;
    double lam = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const ReplicateResult& slot = results[i * reps + r];
      errs0.push_back(slot.estimation);
      errs5.push_back(slot.prediction);
      lam += slot.lambda;
    }
    lambda_mean[i] = lam / static_cast<double>(reps);
    const double m0 = std::accumulate(errs0.begin(), errs0.end(), 0.0) / static_cast<double>(reps);
    const double m5 = std::accumulate(errs5.begin(), errs5.end(), 0.0) / static_cast<double>(reps);
    est_report.n.push_back(static_cast<double>(config.n_values[i]));
    est_report.mean_error.push_back(m0);
    est_report.std_error.push_back(sample_std(errs0, m0));
    pred_report.n.push_back(static_cast<double>(config.n_values[i]));
    pred_report.mean_error.push_back(m5);
    pred_report.std_error.push_back(sample_std(errs5, m5));
    std::fprintf(stderr, "[rate-sweep] n=%d lambda=%.4g est=%.4g pred=%.4g\n",
                 config.n_values[i], lambda_mean[i], m0, m5);
  }

  est_report.fitted_slope = rate_fit(est_report.n, est_report.mean_error).slope;
  pred_report.fitted_slope = rate_fit(pred_report.n, pred_report.mean_error).slope;
  est_report.theoretical_slope = theoretical_rate(b_hat, config.target_r, 0.0);
  pred_report.theoretical_slope = theoretical_rate(b_hat, config.target_r, 0.5);

  ordered_json report;
  report["kind"] = "rate-sweep";
  report["seed"] = config.seed;
  report["family"] = config.family;
  report["degree"] = config.degree;
  report["r"] = config.target_r;
  report["b_hat"] = b_hat;
  report["replicates"] = config.replicates;
  report["lambda_rule"] =
      config.lambda_rule.type == LambdaRule::Type::Theoretical ? "theoretical" : "grid-oracle";
  report["n"] = config.n_values;
  report["lambda"] = lambda_mean;
  auto block = [](const RateReport& r, double s) {
    ordered_json b;
    b["s"] = s;
    b["mean"] = r.mean_error;
    b["std"] = r.std_error;
    b["fitted_slope"] = r.fitted_slope;
    b["theoretical_slope"] = r.theoretical_slope;
    return b;
  };
  report["estimation"] = block(est_report, 0.0);
  report["prediction"] = block(pred_report, 0.5);
  report["prediction"]["n_test"] = config.n_test;
  ordered_json oracle_block;
  oracle_block["samples"] = config.oracle_samples;
  oracle_block["rank"] = static_cast<std::int64_t>(oracle.rank());
  std::vector<double> head;
  for (Eigen::Index m = 0; m < std::min<Eigen::Index>(10, oracle.rank()); ++m) {
    head.push_back(oracle.eigenvalues(m));
  }
  oracle_block["top_eigenvalues"] = head;
  report["oracle"] = oracle_block;
  write_report(config, report);

  {
    std::ofstream csv(out_path(config, "table.csv"), std::ios::binary);
    csv << "n,lambda,estimation_mean,estimation_std,prediction_mean,prediction_std\n";
    for (std::size_t i = 0; i < config.n_values.size(); ++i) {
      csv << config.n_values[i] << ',' << format_double(lambda_mean[i]) << ','
          << format_double(est_report.mean_error[i]) << ','
          << format_double(est_report.std_error[i]) << ','
          << format_double(pred_report.mean_error[i]) << ','
          << format_double(pred_report.std_error[i]) << '\n';
    }
  }

  std::vector<SvgSeries> series;
  auto add_series = [&](const RateReport& r, const std::string& label, const std::string& color) {
    SvgSeries s{label, color, r.n, r.mean_error, false};
    series.push_back(s);
    const OlsFit fitted = rate_fit(r.n, r.mean_error);
    SvgSeries line{label + " fit", color, {r.n.front(), r.n.back()}, {}, true};
    for (double n : line.x) {
      line.y.push_back(std::exp(fitted.intercept + fitted.slope * std::log(n)));
    }
    series.push_back(line);
  };
  add_series(est_report, "estimation (s=0)", "#1f77b4");
  add_series(pred_report, "prediction (s=1/2)", "#d62728");
  write_loglog_svg(out_path(config, "plot.svg"), "error against sample size", "n", "mean error",
                   series, config.svg_timestamp);

  std::printf("rate-sweep: b_hat %.3f | s=0 slope %.4f (theory %.4f) | s=1/2 slope %.4f (theory %.4f)\n",
              b_hat, est_report.fitted_slope, est_report.theoretical_slope,
              pred_report.fitted_slope, pred_report.theoretical_slope);
  return 0;
}

// ----------------------------------------------------------------- check-reg

int run_check_reg(const ExperimentConfig& config) {
  const std::vector<double> sigmas =
      log_grid(config.sigma_grid.lo, config.sigma_grid.hi, config.sigma_grid.points);
  const std::vector<double> lambdas =
      log_grid(config.lambda_grid.lo, config.lambda_grid.hi, config.lambda_grid.points);

  ordered_json report;
  report["kind"] = "check-reg";
  report["sigma_grid"] = {{"lo", config.sigma_grid.lo},
                          {"hi", config.sigma_grid.hi},
                          {"points", config.sigma_grid.points}};
  report["lambda_grid"] = {{"lo", config.lambda_grid.lo},
                           {"hi", config.lambda_grid.hi},
                           {"points", config.lambda_grid.points}};
  report["exponents"] = config.exponents;
  ordered_json families;
  for (const auto& family : {RegularizationFamily::spectral_cutoff(),
                             RegularizationFamily::tikhonov(),
                             RegularizationFamily::landweber()}) {
    const FamilyCheckReport check = check_family(family, sigmas, lambdas, config.exponents);
    ordered_json f;
    f["measured_A"] = check.measured_A;
    f["measured_B_lambda_sup"] = check.measured_B_lambda_sup;
    f["measured_D"] = check.measured_D;
    f["declared"] = {{"A", family.declared_A}, {"B", family.declared_B}, {"D", family.declared_D}};
    ordered_json quals;
    for (const auto& [q, pass] : check.qualification_pass) {
      quals[format_double(q)] = pass;
    }
    f["qualification_pass"] = quals;
    families[family.name()] = f;
    std::printf("%-10s A=%.4f B*=%.4f D=%.4f |", family.name(), check.measured_A,
                check.measured_B_lambda_sup, check.measured_D);
    for (const auto& [q, pass] : check.qualification_pass) {
      std::printf(" q=%g:%s", q, pass ? "pass" : "fail");
    }
    std::printf("\n");
  }
  report["families"] = families;
  write_report(config, report);
  return 0;
}

// -------------------------------------------------------------------- effdim

int run_effdim(const ExperimentConfig& config) {
  const std::vector<double> lambdas =
      log_grid(config.effdim_lambda.lo, config.effdim_lambda.hi, config.effdim_lambda.points);
  ordered_json report;
  report["kind"] = "effdim";
  report["modes"] = config.effdim_modes;
  report["lambda"] = lambdas;
  ordered_json cases = ordered_json::array();
  std::vector<SvgSeries> series;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
  std::ofstream csv(out_path(config, "table.csv"), std::ios::binary);
  csv << "b,lambda,effective_dimension\n";
  for (std::size_t bi = 0; bi < config.effdim_b.size(); ++bi) {
    const double b = config.effdim_b[bi];
    std::vector<double> spectrum(static_cast<std::size_t>(config.effdim_modes));
    for (int m = 1; m <= config.effdim_modes; ++m) {
      spectrum[static_cast<std::size_t>(m - 1)] = std::pow(static_cast<double>(m), -b);
    }
    std::vector<double> dims;
    for (double lambda : lambdas) {
      dims.push_back(effective_dimension(spectrum, lambda));
      csv << format_double(b) << ',' << format_double(lambda) << ','
          << format_double(dims.back()) << '\n';
    }
    std::vector<double> lx(lambdas.size()), ly(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      lx[i] = std::log(lambdas[i]);
      ly[i] = std::log(dims[i]);
    }
    const LineFit fitline = fit_line(lx, ly);
    ordered_json entry;
    entry["b"] = b;
    entry["fitted_slope"] = fitline.slope;
    entry["expected_slope"] = -1.0 / b;
    entry["effective_dimension"] = dims;
    cases.push_back(entry);
    series.push_back({"b=" + format_double(b), colors[bi % 5], lambdas, dims, false});
    std::printf("effdim b=%.2f slope=%.4f expected=%.4f\n", b, fitline.slope, -1.0 / b);
  }
  report["cases"] = cases;
  write_report(config, report);
  write_loglog_svg(out_path(config, "plot.svg"), "effective dimension", "lambda", "N(lambda)",
                   series, config.svg_timestamp);
  return 0;
}

// ------------------------------------------------------------------- minimax

int run_minimax(const ExperimentConfig& config) {
  const IndexFunction phi = IndexFunction::holder(config.minimax_r);
  ordered_json report;
  report["kind"] = "minimax";
  report["b"] = config.minimax_b;
  report["b0"] = config.minimax_b0;
  report["u"] = config.minimax_u;
  report["sigma2"] = config.minimax_sigma2;
  report["r"] = config.minimax_r;
  report["radius"] = config.minimax_radius;
  ordered_json cases = ordered_json::array();
  bool all_ok = true;
  for (int M : config.minimax_M) {
    const Codebook book = vg_codebook(M, mix_seed(config.seed, 0xB00C, M));
    const Eigen::VectorXd spectrum = power_spectrum(config.minimax_b0, config.minimax_b, 2 * M);
    const std::span<const double> spec_span(spectrum.data(),
                                            static_cast<std::size_t>(spectrum.size()));
    for (double s : config.minimax_s) {
      const ProofPlan plan = proof_epsilon(config.minimax_b0, config.minimax_b, phi,
                                           config.minimax_radius, s, config.minimax_u,
                                           config.minimax_sigma2, M);
      const HypothesisFamily family = hypothesis_family(
          spec_span, phi, config.minimax_radius, plan.epsilon, M, s, book);
      const SeparationReport sep = separation_check(family);
      double max_kl = 0.0;
      for (int i = 0; i < family.count(); ++i) {
        for (int j = i + 1; j < family.count(); ++j) {
          max_kl = std::max(max_kl, kl_divergence(family, i, j, plan.n, config.minimax_sigma2));
        }
      }
      const double N = static_cast<double>(book.count() - 1);
      const double budget = config.minimax_u * std::log(N);
      const double bound = tsybakov_bound(N, config.minimax_u);
      const bool ok = sep.pass && max_kl <= budget && bound > 0.0;
      all_ok = all_ok && ok;
      ordered_json entry;
      entry["M"] = M;
      entry["s"] = s;
      entry["n"] = plan.n;
      entry["epsilon"] = plan.epsilon;
      entry["c0"] = plan.c0;
      entry["c1"] = plan.c1;
      entry["implied_M"] = plan.implied_M;
      entry["words"] = book.count();
      entry["N"] = N;
      entry["min_hamming"] = book.min_pairwise_distance;
      entry["min_separation_sq"] = sep.min_separation_sq;
      entry["separation_threshold_sq"] = sep.threshold_sq;
      entry["max_kl"] = max_kl;
      entry["kl_budget"] = budget;
      entry["kl_over_log_N"] = max_kl / std::log(N);
      entry["max_g_norm"] = family.g_norms.maxCoeff();
      entry["tsybakov_bound"] = bound;
      entry["pass"] = ok;
      cases.push_back(entry);
      std::printf(
          "minimax M=%d s=%.1f: words=%d min_sep=%.3e (>= %.3e) max_kl=%.3e (<= %.3e) bound=%.3f %s\n",
          M, s, book.count(), sep.min_separation_sq, sep.threshold_sq, max_kl, budget, bound,
          ok ? "ok" : "FAIL");
    }
  }
  report["cases"] = cases;
  write_report(config, report);
  return all_ok ? 0 : 3;
}

// --------------------------------------------------------------- oracle-test

int rand_int(Rng& rng, int lo, int hi) {  // uniform on [lo, hi]
  const int span = hi - lo + 1;
  const int offset = std::min(static_cast<int>(rng.uniform01() * span), span - 1);
  return lo + offset;
}

int run_oracle_test(const ExperimentConfig& config) {
  Rng rng(mix_seed(config.seed, 0x0DD));
  double worst = 0.0;
  ordered_json cases = ordered_json::array();
  for (int inst = 0; inst < config.ot_instances; ++inst) {
    const int n = rand_int(rng, 1, config.ot_max_n);
    const int p = rand_int(rng, 0, config.ot_max_degree);
    const int m1 = rand_int(rng, 5, config.ot_grid_points);
    const int m2 = rand_int(rng, 5, config.ot_grid_points);
    const auto grid1 = make_grid(0.0, 1.0, m1);
    const auto grid2 = make_grid(0.0, 1.0, m2);
    std::vector<FunctionalSample> X, Y;
    for (int i = 0; i < n; ++i) {
      FunctionalSample x{grid1, Eigen::VectorXd(grid1->size())};
      for (Eigen::Index k = 0; k < grid1->size(); ++k) x.values(k) = rng.uniform_pm();
      FunctionalSample y{grid2, Eigen::VectorXd(grid2->size())};
      for (Eigen::Index k = 0; k < grid2->size(); ++k) y.values(k) = rng.uniform_pm();
      X.push_back(std::move(x));
      Y.push_back(std::move(y));
    }
    for (double lambda : config.ot_lambdas) {
      const PolyRegEstimate est = fit(X, Y, p, lambda, RegularizationFamily::tikhonov());
      const reference::ComponentField gram_path =
          reference::materialize_estimate(est, 1 << 24);
      const reference::ComponentField direct = reference::direct_tikhonov(X, Y, p, lambda);
      const double gap_sq = reference::components_diff_norm_sq(gram_path, direct, grid2, grid1);
      const double ref_sq = reference::components_norm_sq(direct, grid2, grid1);
      const double rel = std::sqrt(gap_sq / std::max(ref_sq, 1e-300));
      worst = std::max(worst, rel);
      ordered_json entry;
      entry["instance"] = inst;
      entry["n"] = n;
      entry["degree"] = p;
      entry["grid_s1"] = m1;
      entry["grid_s2"] = m2;
      entry["lambda"] = lambda;
      entry["relative_gap"] = rel;
      cases.push_back(entry);
    }
  }
  ordered_json report;
  report["kind"] = "oracle-test";
  report["seed"] = config.seed;
  report["tolerance"] = config.ot_tolerance;
  report["max_relative_gap"] = worst;
  report["cases"] = cases;
  report["pass"] = worst <= config.ot_tolerance;
  write_report(config, report);
  std::printf("oracle-test: max relative deviation %.3e (tolerance %.1e)\n", worst,
              config.ot_tolerance);
  return worst <= config.ot_tolerance ? 0 : 3;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  require(j.is_object(), errc::config_error, "config root must be an object");
  ExperimentConfig config;
  require(j.contains("kind"), errc::config_error, "config needs a 'kind'");
  config.kind = j.at("kind").get<std::string>();
  const std::set<std::string> kinds{"rate-sweep", "oracle-test", "check-reg", "minimax",
                                    "effdim"};
  require(kinds.count(config.kind) > 0, errc::config_error,
          "unknown experiment kind '" + config.kind + "'");

  std::set<std::string> allowed{"kind", "seed", "output_dir", "threads", "svg_timestamp"};
  if (config.kind == "rate-sweep") {
    allowed.insert({"process", "grid_s1", "grid_s2", "degree", "oracle_samples", "target",
                    "noise", "family", "n", "replicates", "lambda_rule", "n_test"});
  } else if (config.kind == "check-reg") {
    allowed.insert({"sigma_grid", "lambda_grid", "exponents"});
  } else if (config.kind == "effdim") {
    allowed.insert({"b", "modes", "lambda_grid"});
  } else if (config.kind == "minimax") {
    allowed.insert({"M", "s", "b", "b0", "u", "sigma2", "r", "radius"});
  } else if (config.kind == "oracle-test") {
    allowed.insert({"instances", "max_n", "max_degree", "grid_points", "lambdas", "tolerance"});
  }
  reject_unknown_keys(j, allowed, "config");

  config.seed = j.value("seed", static_cast<std::uint64_t>(1));
  config.output_dir = j.value("output_dir", std::string("out"));
  config.threads = j.value("threads", 0);
  require(config.threads >= 0 && config.threads <= 256, errc::config_error,
          "threads outside [0, 256]");
  config.svg_timestamp = j.value("svg_timestamp", false);

  if (config.kind == "rate-sweep") {
    if (j.contains("process")) {
      const json& p = j.at("process");
      reject_unknown_keys(p, {"modes", "decay", "bound"}, "process");
      config.process.modes = p.value("modes", config.process.modes);
      config.process.decay = p.value("decay", config.process.decay);
      config.process.bound = p.value("bound", config.process.bound);
      require(config.process.modes >= 1 && config.process.modes <= 10000, errc::config_error,
              "process.modes outside [1, 10000]");
      require(config.process.decay > 0.0 && config.process.decay <= 10.0, errc::config_error,
              "process.decay outside (0, 10]");
      require(config.process.bound > 0.0 && config.process.bound <= 1e6, errc::config_error,
              "process.bound outside (0, 1e6]");
    }
    if (j.contains("grid_s1")) config.grid_s1 = parse_grid(j.at("grid_s1"), "grid_s1");
    if (j.contains("grid_s2")) config.grid_s2 = parse_grid(j.at("grid_s2"), "grid_s2");
    config.degree = j.value("degree", 1);
    require(config.degree >= 0 && config.degree <= 6, errc::config_error,
            "degree outside [0, 6]");
    config.oracle_samples = j.value("oracle_samples", 2000);
    require(config.oracle_samples >= 100 && config.oracle_samples <= 100000, errc::config_error,
            "oracle_samples outside [100, 100000]");
    if (j.contains("target")) {
      const json& t = j.at("target");
      reject_unknown_keys(t, {"phi", "r", "radius", "modes"}, "target");
      const std::string phi_kind = t.value("phi", std::string("holder"));
      require(phi_kind == "holder", errc::config_error, "target.phi must be 'holder'");
      config.target_r = t.value("r", 1.0);
      config.target_radius = t.value("radius", 1.0);
      config.target_modes = t.value("modes", 8);
      require(config.target_r > 0.0 && config.target_r <= 16.0, errc::config_error,
              "target.r outside (0, 16]");
      require(config.target_radius > 0.0 && config.target_radius <= 1e3, errc::config_error,
              "target.radius outside (0, 1e3]");
      require(config.target_modes >= 1 && config.target_modes <= 1000, errc::config_error,
              "target.modes outside [1, 1000]");
    }
    if (j.contains("noise")) {
      const json& nz = j.at("noise");
      reject_unknown_keys(nz, {"sigma2", "modes"}, "noise");
      config.noise.sigma2 = nz.value("sigma2", 0.0);
      config.noise.modes = nz.value("modes", 25);
      require(config.noise.sigma2 >= 0.0 && config.noise.sigma2 <= 1e3, errc::config_error,
              "noise.sigma2 outside [0, 1e3]");
      require(config.noise.modes >= 1 && config.noise.modes <= 10000, errc::config_error,
              "noise.modes outside [1, 10000]");
    }
    config.family = j.value("family", std::string("tikhonov"));
    RegularizationFamily::from_name(config.family);  // validates
    require(j.contains("n"), errc::config_error, "rate-sweep needs an 'n' list");
    config.n_values = j.at("n").get<std::vector<int>>();
    for (int n : config.n_values) {
      require(n >= 1 && n <= 100000, errc::config_error, "n outside [1, 100000]");
    }
    config.replicates = j.value("replicates", 20);
    require(config.replicates >= 1 && config.replicates <= 10000, errc::config_error,
            "replicates outside [1, 10000]");
    if (j.contains("lambda_rule")) {
      const json& lr = j.at("lambda_rule");
      reject_unknown_keys(lr, {"type", "min", "max", "count"}, "lambda_rule");
      const std::string type = lr.value("type", std::string("theoretical"));
      if (type == "theoretical") {
        config.lambda_rule.type = LambdaRule::Type::Theoretical;
      } else if (type == "grid-oracle") {
        config.lambda_rule.type = LambdaRule::Type::GridOracle;
        config.lambda_rule.grid_min = lr.value("min", 1e-6);
        config.lambda_rule.grid_max = lr.value("max", 1.0);
        config.lambda_rule.grid_count = lr.value("count", 25);
        require(config.lambda_rule.grid_min > 0.0 &&
                    config.lambda_rule.grid_min < config.lambda_rule.grid_max,
                errc::config_error, "lambda_rule grid needs 0 < min < max");
        require(config.lambda_rule.grid_count >= 2 && config.lambda_rule.grid_count <= 1000,
                errc::config_error, "lambda_rule.count outside [2, 1000]");
      } else {
        fail(errc::config_error, "lambda_rule.type must be 'theoretical' or 'grid-oracle'");
      }
    }
    config.n_test = j.value("n_test", 500);
    require(config.n_test >= 100 && config.n_test <= 100000, errc::config_error,
            "n_test outside [100, 100000]");
  } else if (config.kind == "check-reg") {
    if (j.contains("sigma_grid")) config.sigma_grid = parse_scan(j.at("sigma_grid"), "sigma_grid");
    if (j.contains("lambda_grid"))
      config.lambda_grid = parse_scan(j.at("lambda_grid"), "lambda_grid");
    if (j.contains("exponents")) config.exponents = j.at("exponents").get<std::vector<double>>();
    for (double q : config.exponents) {
      require(q > 0.0 && q <= 64.0, errc::config_error, "exponent outside (0, 64]");
    }
    require(config.sigma_grid.hi <= 1.0 && config.lambda_grid.hi <= 1.0, errc::config_error,
            "check grids must stay within (0, 1]");
  } else if (config.kind == "effdim") {
    if (j.contains("b")) config.effdim_b = j.at("b").get<std::vector<double>>();
    for (double b : config.effdim_b) {
      require(b > 1.0 && b <= 16.0, errc::config_error, "effdim b outside (1, 16]");
    }
    config.effdim_modes = j.value("modes", 1000000);
    require(config.effdim_modes >= 10 && config.effdim_modes <= 100000000, errc::config_error,
            "effdim modes outside [10, 1e8]");
    if (j.contains("lambda_grid"))
      config.effdim_lambda = parse_scan(j.at("lambda_grid"), "lambda_grid");
  } else if (config.kind == "minimax") {
    if (j.contains("M")) config.minimax_M = j.at("M").get<std::vector<int>>();
    for (int M : config.minimax_M) {
      require(M >= 8 && M <= 64, errc::config_error, "minimax M outside [8, 64]");
    }
    if (j.contains("s")) config.minimax_s = j.at("s").get<std::vector<double>>();
    for (double s : config.minimax_s) {
      require(s >= 0.0 && s <= 0.5, errc::config_error, "minimax s outside [0, 1/2]");
    }
    config.minimax_b = j.value("b", 2.0);
    config.minimax_b0 = j.value("b0", 1.0);
    config.minimax_u = j.value("u", 0.1);
    config.minimax_sigma2 = j.value("sigma2", 1.0);
    config.minimax_r = j.value("r", 1.0);
    config.minimax_radius = j.value("radius", 1.0);
    require(config.minimax_b > 1.0 && config.minimax_b <= 16.0, errc::config_error,
            "minimax b outside (1, 16]");
    require(config.minimax_b0 > 0.0 && config.minimax_b0 <= 1e3, errc::config_error,
            "minimax b0 outside (0, 1e3]");
    require(config.minimax_u > 0.0 && config.minimax_u < 0.125, errc::config_error,
            "minimax u outside (0, 1/8)");
    require(config.minimax_sigma2 > 0.0 && config.minimax_sigma2 <= 1e3, errc::config_error,
            "minimax sigma2 outside (0, 1e3]");
    require(config.minimax_r > 0.0 && config.minimax_r <= 16.0, errc::config_error,
            "minimax r outside (0, 16]");
    require(config.minimax_radius > 0.0 && config.minimax_radius <= 1e3, errc::config_error,
            "minimax radius outside (0, 1e3]");
  } else if (config.kind == "oracle-test") {
    config.ot_instances = j.value("instances", 10);
    config.ot_max_n = j.value("max_n", 5);
    config.ot_max_degree = j.value("max_degree", 2);
    config.ot_grid_points = j.value("grid_points", 9);
    if (j.contains("lambdas")) config.ot_lambdas = j.at("lambdas").get<std::vector<double>>();
    config.ot_tolerance = j.value("tolerance", 1e-8);
    require(config.ot_instances >= 1 && config.ot_instances <= 1000, errc::config_error,
            "instances outside [1, 1000]");
    require(config.ot_max_n >= 1 && config.ot_max_n <= 32, errc::config_error,
            "max_n outside [1, 32]");
    require(config.ot_max_degree >= 0 && config.ot_max_degree <= 3, errc::config_error,
            "max_degree outside [0, 3]");
    require(config.ot_grid_points >= 5 && config.ot_grid_points <= 12, errc::config_error,
            "grid_points outside [5, 12]");
    for (double lambda : config.ot_lambdas) {
      require(lambda > 0.0 && lambda <= 10.0, errc::config_error, "lambda outside (0, 10]");
    }
    require(config.ot_tolerance > 0.0, errc::config_error, "tolerance must be positive");
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::config_error, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::config_error, "config parse failure: " + std::string(e.what()));
  }
  return parse_config(j);
}

int run_experiment(const ExperimentConfig& config) {
  if (config.kind == "rate-sweep") return run_rate_sweep(config);
  if (config.kind == "check-reg") return run_check_reg(config);
  if (config.kind == "effdim") return run_effdim(config);
  if (config.kind == "minimax") return run_minimax(config);
  if (config.kind == "oracle-test") return run_oracle_test(config);
  fail(errc::config_error, "unknown experiment kind '" + config.kind + "'");
}

}  // namespace fofpoly
