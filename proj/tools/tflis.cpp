#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tflis/experiment.hpp"
#include "tflis/scenario.hpp"
#include "tflis/verify.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing output file '" + path + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Batch driver for the fixed-lag interval smoother with "
      "external-stream knowledge transfer"};
  app.require_subcommand(1);

  std::string sweep_config, sweep_out;
  int sweep_jobs = 0;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand(
      "sweep", "Monte Carlo scores over the external noise grid, as CSV");
  sweep->add_option("--config", sweep_config, "scenario JSON file")->required();
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_option("--jobs", sweep_jobs,
                    "worker threads (default: available cores)");
  auto* sweep_seed_opt =
      sweep->add_option("--seed", sweep_seed, "master seed override");

  std::string trace_config, trace_out;
  double trace_re = 0.0;
  int trace_jobs = 0;
  std::uint64_t trace_seed = 0;
  auto* trace = app.add_subcommand(
      "trace", "per-step mean squared errors at one noise level, as CSV");
  trace->add_option("--config", trace_config, "scenario JSON file")->required();
  trace->add_option("--r-e", trace_re, "external noise variance")->required();
  trace->add_option("--out", trace_out, "output CSV path")->required();
  trace->add_option("--jobs", trace_jobs,
                    "worker threads (default: available cores)");
  auto* trace_seed_opt =
      trace->add_option("--seed", trace_seed, "master seed override");

  auto* verify =
      app.add_subcommand("verify", "run the built-in cross-validation suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sweep) {
      tflis::ScenarioConfig cfg = tflis::load_scenario(sweep_config);
      if (*sweep_seed_opt) {
        cfg.master_seed = sweep_seed;
      }
      const auto rows = tflis::run_sweep(cfg, sweep_jobs);
      write_file(sweep_out, tflis::sweep_csv(rows, cfg.methods));
      std::cerr << "wrote " << sweep_out << " (" << rows.size() << " rows)\n";
      return 0;
    }
    if (*trace) {
      tflis::ScenarioConfig cfg = tflis::load_scenario(trace_config);
      if (*trace_seed_opt) {
        cfg.master_seed = trace_seed;
      }
      if (!(trace_re > 0.0)) {
        std::cerr << "option error: --r-e must be positive\n";
        return 1;
      }
      const auto result = tflis::run_trace(cfg, trace_re, trace_jobs);
      write_file(trace_out, tflis::trace_csv(result, cfg.methods));
      std::cerr << "wrote " << trace_out << " (" << result.scored_steps
                << " rows)\n";
      return 0;
    }
    if (*verify) {
      int failures = 0;
      const auto results = tflis::run_verification_suite();
      for (const auto& check : results) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << ": "
                  << check.detail << "\n";
        failures += check.pass ? 0 : 1;
      }
      std::cout << "verification: " << (results.size() - failures) << "/"
                << results.size() << " checks passed\n";
      return failures == 0 ? 0 : 2;
    }
  } catch (const tflis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
