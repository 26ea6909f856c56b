#ifndef PERCOLAB_TOOLS_COMMANDS_HPP_
#define PERCOLAB_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace percolab::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<double> window;
};

struct SeedChoice {
  std::uint64_t seed = 0;
  std::string source;  // flag | env | config | generated
};

//! flag > PERCOLAB_SEED > config > generated.
SeedChoice resolve_seed(const std::optional<std::uint64_t>& flag, const char* env,
                        const std::optional<std::uint64_t>& config);

void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

//! Canonical echo of everything that shapes numeric output.
nlohmann::json config_echo(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RunResult {
  nlohmann::json config;
  std::vector<std::string> outputs;
  double wall_clock = 0.0;
  std::string version;
  nlohmann::json verdicts;
  std::uint64_t seed = 0;
  std::string seed_source;

  nlohmann::json to_json() const;
};

//! Executes cfg.command and writes its files under cfg.out.
RunResult run(const ExperimentConfig& cfg, const SeedChoice& seed);

}  // namespace percolab::cli

#endif  // PERCOLAB_TOOLS_COMMANDS_HPP_
