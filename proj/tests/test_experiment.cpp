#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fofpoly/experiment.hpp"
#include "fofpoly/io.hpp"
#include "fofpoly/metrics.hpp"

using namespace fofpoly;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fofpoly_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json tiny_rate_config(const std::string& out) {
  return json{{"kind", "rate-sweep"},
              {"seed", 99},
              {"output_dir", out},
              {"process", {{"modes", 10}, {"decay", 2.0}, {"bound", 1.0}}},
              {"grid_s1", {{"lo", 0.0}, {"hi", 1.0}, {"points", 32}}},
              {"grid_s2", {{"lo", 0.0}, {"hi", 1.0}, {"points", 32}}},
              {"degree", 1},
              {"oracle_samples", 150},
              {"target", {{"phi", "holder"}, {"r", 1.0}, {"radius", 1.0}, {"modes", 3}}},
              {"noise", {{"sigma2", 0.05}, {"modes", 8}}},
              {"family", "tikhonov"},
              {"n", {16, 24, 32, 48}},
              {"replicates", 3},
              {"lambda_rule", {{"type", "grid-oracle"}, {"min", 1e-4}, {"max", 1.0}, {"count", 8}}},
              {"n_test", 100}};
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad ranges") {
  json good = tiny_rate_config("unused");
  CHECK(parse_config(good).kind == "rate-sweep");

  json extra = good;
  extra["typo_key"] = 1;
  CHECK_THROWS_AS(parse_config(extra), Error);

  json nested = good;
  nested["process"]["velocity"] = 3;
  CHECK_THROWS_AS(parse_config(nested), Error);

  json bad_degree = good;
  bad_degree["degree"] = 9;
  CHECK_THROWS_AS(parse_config(bad_degree), Error);

  json bad_family = good;
  bad_family["family"] = "ridge";
  CHECK_THROWS_AS(parse_config(bad_family), Error);

  json bad_kind = good;
  bad_kind["kind"] = "sweep";
  CHECK_THROWS_AS(parse_config(bad_kind), Error);

  json no_n = good;
  no_n.erase("n");
  CHECK_THROWS_AS(parse_config(no_n), Error);
}

TEST_CASE("check-reg run emits the qualification pattern") {
  const auto dir = temp_dir("checkreg");
  ExperimentConfig config = parse_config(json{{"kind", "check-reg"}, {"output_dir", dir.string()}});
  CHECK(run_experiment(config) == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report["families"]["tikhonov"]["qualification_pass"]["1"] == true);
  CHECK(report["families"]["tikhonov"]["qualification_pass"]["2"] == false);
  CHECK(report["families"]["cutoff"]["qualification_pass"]["4"] == true);
  CHECK(report["families"]["landweber"]["qualification_pass"]["4"] == true);
  CHECK(report["families"]["landweber"]["measured_B_lambda_sup"].get<double>() <= 2.0);
}

TEST_CASE("effdim run fits the expected slopes") {
  const auto dir = temp_dir("effdim");
  ExperimentConfig config = parse_config(json{{"kind", "effdim"},
                                              {"output_dir", dir.string()},
                                              {"b", {1.5, 2.0, 3.0}},
                                              {"modes", 200000}});
  CHECK(run_experiment(config) == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  for (const auto& entry : report["cases"]) {
    const double slope = entry["fitted_slope"].get<double>();
    const double expected = entry["expected_slope"].get<double>();
    CHECK(std::abs(slope - expected) < 0.1);
  }
  CHECK(std::filesystem::exists(dir / "table.csv"));
  CHECK(std::filesystem::exists(dir / "plot.svg"));
}

TEST_CASE("minimax run closes the budget") {
  const auto dir = temp_dir("minimax");
  ExperimentConfig config =
      parse_config(json{{"kind", "minimax"}, {"output_dir", dir.string()}, {"seed", 5}});
  CHECK(run_experiment(config) == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  for (const auto& entry : report["cases"]) {
    CHECK(entry["pass"] == true);
    CHECK(entry["tsybakov_bound"].get<double>() > 0.0);
  }
}

TEST_CASE("oracle-test run stays within tolerance") {
  const auto dir = temp_dir("oracletest");
  ExperimentConfig config = parse_config(
      json{{"kind", "oracle-test"}, {"output_dir", dir.string()}, {"instances", 4}, {"seed", 2}});
  CHECK(run_experiment(config) == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report["max_relative_gap"].get<double>() <= 1e-8);
}

TEST_CASE("rate-sweep outputs are byte-identical across reruns") {
  const auto dir_a = temp_dir("rate_a");
  const auto dir_b = temp_dir("rate_b");
  ExperimentConfig a = parse_config(tiny_rate_config(dir_a.string()));
  ExperimentConfig b = parse_config(tiny_rate_config(dir_b.string()));
  a.threads = 2;
  b.threads = 1;  // scheduling must not leak into the artifacts
  CHECK(run_experiment(a) == 0);
  CHECK(run_experiment(b) == 0);
  CHECK(slurp(dir_a / "report.json") == slurp(dir_b / "report.json"));
  CHECK(slurp(dir_a / "table.csv") == slurp(dir_b / "table.csv"));
  CHECK(slurp(dir_a / "plot.svg") == slurp(dir_b / "plot.svg"));
  const json report = json::parse(slurp(dir_a / "report.json"));
  CHECK(report["estimation"]["mean"].size() == 4);
  CHECK(report["prediction"]["n_test"] == 100);
}

TEST_CASE("lambda rule consistency under the theoretical rule") {
  const auto dir = temp_dir("rate_theo");
  json cfg = tiny_rate_config(dir.string());
  cfg["lambda_rule"] = json{{"type", "theoretical"}};
  cfg["n"] = {32, 48, 64, 96};
  cfg["replicates"] = 2;
  ExperimentConfig config = parse_config(cfg);
  CHECK(run_experiment(config) == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  const double b_hat = report["b_hat"].get<double>();
  for (std::size_t i = 0; i < report["n"].size(); ++i) {
    const double n = report["n"][i].get<double>();
    const double lambda = report["lambda"][i].get<double>();
    const double expected = theoretical_lambda(n, IndexFunction::holder(1.0), b_hat);
    CHECK(std::abs(lambda - expected) / expected < 1e-9);
  }
}

TEST_CASE("sample CSV round-trip") {
  const auto dir = temp_dir("csv");
  auto grid = make_grid(0.0, 1.0, 17);
  std::vector<FunctionalSample> samples;
  for (int i = 0; i < 3; ++i) {
    samples.push_back(draw_process({6, 2.0, 1.0}, grid, 1000 + static_cast<unsigned>(i)));
  }
  write_samples_csv(dir / "samples.csv", samples);
  const auto loaded = read_samples_csv(dir / "samples.csv");
  REQUIRE(loaded.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK((loaded[i].values - samples[i].values).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(same_grid(loaded.front().grid, grid));

  // estimate bundle
  auto ys = std::vector<FunctionalSample>{samples[0], samples[1], samples[2]};
  const auto est = fit(samples, ys, 1, 0.1, RegularizationFamily::tikhonov());
  export_estimate(dir / "estimate", est);
  CHECK(std::filesystem::exists(dir / "estimate" / "manifest.json"));
  const json manifest = json::parse(slurp(dir / "estimate" / "manifest.json"));
  CHECK(manifest["lambda"] == 0.1);
  CHECK(manifest["family"] == "tikhonov");

  // dataset bundle
  export_dataset(dir / "dataset", Dataset{samples, ys});
  const auto back = read_samples_csv(dir / "dataset" / "inputs.csv");
  CHECK(back.size() == samples.size());
  CHECK(std::filesystem::exists(dir / "dataset" / "manifest.json"));
}
