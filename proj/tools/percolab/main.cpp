#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "percolab/error.hpp"
#include "percolab/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kSchemaError = 1;
constexpr int kRuntimeError = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace percolab::cli;
  CLI::App app{"Poisson Boolean percolation experiments"};
  app.set_version_flag("--version", percolab::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<double> window;
  bool lenient = false;

  for (const char* name : kCommands) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " command");
    sub->add_option("config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (beats PERCOLAB_SEED and the config)");
    sub->add_option("--trials", trials, "Monte Carlo trials per estimate")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--window", window, "window radius L")->check(CLI::PositiveNumber);
    sub->add_flag("--lenient", lenient, "warn on unknown config keys instead of failing");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchemaError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    auto cfg = parse_config(config_path, !lenient);
    for (const auto& w : cfg.warnings) std::cerr << "percolab: warning: " << w << '\n';
    if (!cfg.command.empty() && cfg.command != command) {
      throw ConfigError({{0, "command", "config declares '" + cfg.command + "' but '" + command +
                                            "' was requested"}});
    }
    cfg.command = command;
    apply_overrides(cfg, {std::nullopt, trials, threads, out, window});
    const auto choice = resolve_seed(seed, std::getenv("PERCOLAB_SEED"), cfg.seed);
    if (choice.source == "generated") std::cerr << "percolab: generated seed " << choice.seed << '\n';
    const auto result = run(cfg, choice);
    std::cout << result.to_json().dump(2) << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "percolab: " << e.what() << '\n';
    return kSchemaError;
  } catch (const percolab::Error& e) {
    std::cerr << "percolab: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "percolab: " << e.what() << '\n';
    return kRuntimeError;
  }
}
