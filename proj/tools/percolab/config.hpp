#ifndef PERCOLAB_TOOLS_CONFIG_HPP_
#define PERCOLAB_TOOLS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace percolab::cli {

struct SchemaIssue {
  int line = 0;  // 1-based, 0 when unknown
  std::string field;
  std::string message;

  std::string text() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

struct SpaceDecl {
  std::string kind = "euclidean";  // euclidean | hyperbolic | cayley | net
  std::string group = "z2";        // cayley: z, z2, z3, z2-king, free2, heisenberg, ...
  std::optional<double> padding;   // default: R
  std::optional<double> radius;    // codomain only: window of the measure table
  double net_epsilon = 1.0;        // net: separation of the Euclidean net
  double net_extent = 10.0;        // net: radius of the netted Euclidean disk
};

struct MapDecl {
  std::string kind;  // identity | std-to-king | king-to-std | rounding | net
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  bool double_gamma = false;
};

struct IntensityDecl {
  std::string kind = "homogeneous";  // homogeneous | sine
  double lambda = 1.0;
  double amplitude = 0.5;  // sine: lambda (1 + amplitude sin x1)
};

struct ExperimentConfig {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 200;
  unsigned threads = 1;
  SpaceDecl space;
  std::optional<SpaceDecl> codomain;
  std::optional<MapDecl> map;
  IntensityDecl intensity;
  bool has_lambda = false;
  double R = 1.0;
  std::vector<double> windows;  // window radii L
  std::vector<double> lambdas;
  double core_fraction = 0.25;
  std::optional<double> shell_offset;
  // lambda-c
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  double tolerance = 1e-3;
  bool stop_on_ci = true;
  // qi-check
  std::size_t pairs = 2000;
  std::size_t measure_samples = 400'000;
  // growth
  int n_max = 16;
  // run
  bool coordinates = false;
  bool labels = false;
  std::string out = "out";
  std::string source;  // raw text as read
  std::vector<std::string> warnings;
};

inline constexpr const char* kCommands[] = {"run",       "sweep",      "lambda-c",
                                            "qi-check",  "invariance", "growth"};

bool known_command(const std::string& name);

//! Parse and validate. Throws ConfigError with every issue found.
ExperimentConfig parse_config_text(const std::string& text, bool strict = true);
ExperimentConfig parse_config(const std::string& path, bool strict = true);

//! Cross-field checks once the command is known (CLI may supply it).
void validate_for_command(const ExperimentConfig& cfg);

}  // namespace percolab::cli

#endif  // PERCOLAB_TOOLS_CONFIG_HPP_
