// Command-line front end for the benchmark harness.
//
//   simplicial run <config.json> [--quick] [--output DIR] [--force]
//                  [--threads N] [--seed S] [--clock real|fixed]
//   simplicial validate <config.json>
//   simplicial summarize <result.json>
//
// Exit codes: 0 success, 2 configuration or usage error, 3 input data error,
// 4 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "harness/experiments.hpp"
#include "simplicial/version.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

int default_threads() {
  const unsigned hinted = std::thread::hardware_concurrency();
  return hinted == 0 ? 1 : static_cast<int>(hinted);
}

int run_command(const std::string& config_path, bool quick, const std::string& output,
                bool force, int threads, std::uint64_t seed_override,
                const std::string& clock_override) {
  namespace hn = simplicial::harness;
  hn::ExperimentConfig config = hn::load_config(config_path);
  if (quick) hn::apply_quick(config);
  if (!output.empty()) config.output = output;
  if (seed_override != 0) config.base_seed = seed_override;
  if (clock_override == "real") config.clock = hn::ClockMode::kReal;
  if (clock_override == "fixed") config.clock = hn::ClockMode::kFixed;

  hn::RunOptions options;
  options.threads = threads;
  std::cerr << "running " << config.name << " (" << hn::kind_name(config.kind) << "): "
            << config.iterations << " iterations x " << config.replicates
            << " replicates, seed " << config.base_seed << ", " << threads
            << (threads == 1 ? " thread\n" : " threads\n");

  const hn::ExperimentResult result = hn::run_experiment(config, options);
  const auto written = hn::write_results(result, config.output, force);
  for (const auto& path : written) std::cout << path.generic_string() << "\n";
  return kExitSuccess;
}

int validate_command(const std::string& config_path) {
  namespace hn = simplicial::harness;
  const hn::ExperimentConfig config = hn::load_config(config_path);
  std::cout << config_path << ": ok\n"
            << "  " << hn::kind_name(config.kind) << " \"" << config.name << "\", "
            << config.iterations << " iterations x " << config.replicates
            << " replicates, seed " << config.base_seed << ", output "
            << config.output.generic_string() << "\n";
  return kExitSuccess;
}

int summarize_command(const std::string& result_path) {
  namespace hn = simplicial::harness;
  hn::summarize_result(hn::read_result(result_path), std::cout);
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplicial sampler benchmark harness"};
  app.set_version_flag("--version", std::string(simplicial::kVersionString));
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string clock_override;
  bool quick = false;
  bool force = false;
  int threads = default_threads();
  std::uint64_t seed_override = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_flag("--quick", quick, "desk-scale preset: 10% iterations and replicates");
  run->add_option("--output", output, "override the config's output directory");
  run->add_flag("--force", force, "overwrite existing results");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed_override, "override the config's base seed")
      ->check(CLI::PositiveNumber);
  run->add_option("--clock", clock_override, "override the config's clock mode")
      ->check(CLI::IsMember({"real", "fixed"}));

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_path, "experiment config (JSON)")->required();

  std::string result_path;
  CLI::App* summarize = app.add_subcommand("summarize", "print a digest of a result.json");
  summarize->add_option("result", result_path, "result document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? kExitSuccess : kExitConfig;
  }

  try {
    if (run->parsed())
      return run_command(config_path, quick, output, force, threads, seed_override,
                         clock_override);
    if (validate->parsed()) return validate_command(validate_path);
    return summarize_command(result_path);
  } catch (const simplicial::harness::config_error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const simplicial::parse_error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitData;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
}
