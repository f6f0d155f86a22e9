// Batch experiment runner: every subcommand reads one JSON config, runs the
// experiment and writes report.json (plus table.csv / plot.svg where it makes
// sense) into the output directory.  Exit codes: 0 success, 2 config error,
// 3 numeric failure.

#include <CLI11.hpp>
#include <cstdio>

#include "fofpoly/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;
  bool svg_timestamp = false;
};

void attach(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
  cmd->add_option("--threads", args.threads, "worker count (0 = hardware)");
  cmd->add_option("--seed", args.seed, "seed override");
  cmd->add_flag("--svg-timestamp", args.svg_timestamp, "embed a timestamp comment in plots");
}

int dispatch(const std::string& kind, const CommonArgs& args) {
  fofpoly::ExperimentConfig config = fofpoly::load_config(args.config_path);
  if (config.kind != kind) {
    std::fprintf(stderr, "config kind '%s' does not match subcommand '%s'\n",
                 config.kind.c_str(), kind.c_str());
    return 2;
  }
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (args.threads >= 0) config.threads = args.threads;
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  if (args.svg_timestamp) config.svg_timestamp = true;
  return fofpoly::run_experiment(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"function-on-function polynomial regression experiments"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds{"rate-sweep", "oracle-test", "check-reg", "minimax",
                                       "effdim"};
  std::map<std::string, CommonArgs> args;
  for (const auto& kind : kinds) {
    attach(app.add_subcommand(kind), args[kind]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& kind : kinds) {
      if (app.got_subcommand(kind)) return dispatch(kind, args[kind]);
    }
  } catch (const fofpoly::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == fofpoly::errc::config_error ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
