// Command-line front end: single trajectories, Monte Carlo ensembles,
// threshold reports and the built-in validation suite.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime blow-up,
// 3 validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "predprey/predprey.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw predprey::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trajectories = 0;
  int threads = 1;
};

predprey::ExperimentConfig load_config(const CommonArgs& args) {
  predprey::ExperimentConfig cfg = predprey::parse_config(read_file(args.config_path));
  if (args.seed_set) cfg.seed = args.seed;
  if (args.trajectories > 0) cfg.trajectories = args.trajectories;
  if (!args.out_path.empty()) cfg.output_path = args.out_path;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic predator-prey reaction-diffusion toolkit"};
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", args.config_path, "Experiment config file")
          ->required();
    cmd->add_option("--out", args.out_path, "Output path (overrides config)");
    cmd->add_option("--seed", args.seed, "Master seed (overrides config)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--traj", args.trajectories, "Ensemble size override");
    cmd->add_option("--threads", args.threads, "Worker threads");
  };

  CLI::App* sim = app.add_subcommand("simulate", "Run one sample path, write its record as CSV");
  add_common(sim, true);
  CLI::App* ens = app.add_subcommand("ensemble", "Run a Monte Carlo ensemble, write reduced statistics as CSV");
  add_common(ens, true);
  CLI::App* thr = app.add_subcommand("thresholds", "Report extinction/permanence thresholds without simulating");
  add_common(thr, true);
  CLI::App* val = app.add_subcommand("validate", "Run the built-in invariant suite");
  add_common(val, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      const predprey::ExperimentConfig cfg = load_config(args);
      try {
        const predprey::TrajectoryRecord rec = predprey::run_single(cfg, 0);
        predprey::write_text_file(cfg.output_path, predprey::record_csv(cfg, rec));
        std::cout << "wrote " << cfg.output_path << " (" << rec.times.size()
                  << " records, relative clipped mass "
                  << rec.relative_clipped_mass() << ")\n";
      } catch (const predprey::BlowupError& e) {
        predprey::write_text_file(cfg.output_path,
                                  std::string("# error = ") + e.what() + "\n");
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      } catch (const predprey::PositivityError& e) {
        predprey::write_text_file(cfg.output_path,
                                  std::string("# error = ") + e.what() + "\n");
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return 0;
    }

    if (ens->parsed()) {
      const predprey::ExperimentConfig cfg = load_config(args);
      try {
        const predprey::EnsembleResult result =
            predprey::run_ensemble(cfg, args.threads);
        predprey::write_text_file(cfg.output_path,
                                  predprey::ensemble_csv(cfg, result));
        std::cout << "wrote " << cfg.output_path << " (" << cfg.trajectories
                  << " trajectories, verdict "
                  << predprey::to_string(result.report.verdict) << ")\n";
      } catch (const predprey::BlowupError& e) {
        predprey::write_text_file(cfg.output_path,
                                  std::string("# error = ") + e.what() + "\n");
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      } catch (const predprey::PositivityError& e) {
        predprey::write_text_file(cfg.output_path,
                                  std::string("# error = ") + e.what() + "\n");
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return 0;
    }

    if (thr->parsed()) {
      const predprey::ExperimentConfig cfg = load_config(args);
      const predprey::Grid grid = cfg.make_grid();
      const predprey::ThresholdReport rep = predprey::classify(
          grid, cfg.make_coefficients(grid), cfg.make_noise_spec());
      const std::string text = predprey::threshold_text(rep);
      std::cout << text;
      if (!args.out_path.empty()) predprey::write_text_file(args.out_path, text);
      return 0;
    }

    if (val->parsed()) {
      predprey::ValidationOptions opt;
      if (args.trajectories > 0) opt.trajectories = args.trajectories;
      opt.threads = args.threads;
      const std::vector<predprey::CheckResult> results = predprey::run_validation(opt);
      predprey::print_validation_table(std::cout, results);
      return predprey::all_pass(results) ? 0 : 3;
    }
  } catch (const predprey::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
