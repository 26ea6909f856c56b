#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <type_traits>

#include <yaml-cpp/yaml.h>

namespace percolab::cli {

std::string SchemaIssue::text() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

namespace {

std::string join_issues(const std::vector<SchemaIssue>& issues) {
  std::string out = "invalid config";
  for (const auto& i : issues) out += "\n  " + i.text();
  return out;
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

class Reader {
 public:
  explicit Reader(bool strict) : strict_(strict) {}

  void issue(const YAML::Node& n, std::string field, std::string message) {
    issues_.push_back({line_of(n), std::move(field), std::move(message)});
  }

  // Flags keys outside `allowed`; warnings in lenient mode.
  void keys(const YAML::Node& map, const std::string& prefix, std::set<std::string> allowed) {
    if (!map.IsMap()) {
      issue(map, prefix.empty() ? "<root>" : prefix, "expected a mapping");
      return;
    }
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (allowed.count(key)) continue;
      const auto field = prefix.empty() ? key : prefix + "." + key;
      if (strict_) {
        issue(kv.first, field, "unknown key");
      } else {
        warnings_.push_back({line_of(kv.first), field, "unknown key ignored"});
      }
    }
  }

  template <class T>
  std::optional<T> get(const YAML::Node& parent, const std::string& key, const std::string& field) {
    const auto n = parent[key];
    if (!n) return std::nullopt;
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      issue(n, field, std::string("expected ") + kind_name<T>());
      return std::nullopt;
    }
  }

  std::optional<double> positive(const YAML::Node& parent, const std::string& key,
                                 const std::string& field, bool allow_zero = false) {
    auto v = get<double>(parent, key, field);
    if (v && (!std::isfinite(*v) || (allow_zero ? *v < 0.0 : *v <= 0.0))) {
      issue(parent[key], field, allow_zero ? "must be >= 0" : "must be > 0");
      return std::nullopt;
    }
    return v;
  }

  std::vector<SchemaIssue> issues_;
  std::vector<SchemaIssue> warnings_;

 private:
  template <class T>
  static const char* kind_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "an integer";
  }

  bool strict_;
};

const std::set<std::string> kGroups = {"z", "z2", "z3", "z4", "z2-king", "free2", "free3",
                                       "heisenberg"};

SpaceDecl read_space(Reader& r, const YAML::Node& n, const std::string& prefix) {
  SpaceDecl s;
  r.keys(n, prefix, {"kind", "group", "padding", "radius", "epsilon", "extent"});
  if (!n.IsMap()) return s;
  if (auto k = r.get<std::string>(n, "kind", prefix + ".kind")) {
    if (*k == "euclidean" || *k == "hyperbolic" || *k == "cayley" || *k == "net") {
      s.kind = *k;
    } else {
      r.issue(n["kind"], prefix + ".kind", "unknown space kind '" + *k +
                                               "' (euclidean, hyperbolic, cayley, net)");
    }
  }
  if (auto g = r.get<std::string>(n, "group", prefix + ".group")) {
    if (kGroups.count(*g)) {
      s.group = *g;
    } else {
      r.issue(n["group"], prefix + ".group", "unknown group '" + *g + "'");
    }
  }
  s.padding = r.positive(n, "padding", prefix + ".padding", true);
  s.radius = r.positive(n, "radius", prefix + ".radius");
  if (auto e = r.positive(n, "epsilon", prefix + ".epsilon")) s.net_epsilon = *e;
  if (auto e = r.positive(n, "extent", prefix + ".extent")) s.net_extent = *e;
  return s;
}

std::vector<double> read_lambdas(Reader& r, const YAML::Node& n) {
  std::vector<double> out;
  if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto field = "lambdas[" + std::to_string(i) + "]";
      try {
        const double v = n[i].as<double>();
        if (!(v >= 0.0) || !std::isfinite(v)) {
          r.issue(n[i], field, "must be >= 0");
        } else {
          out.push_back(v);
        }
      } catch (const YAML::Exception&) {
        r.issue(n[i], field, "expected a number");
      }
    }
    if (n.size() == 0) r.issue(n, "lambdas", "must not be empty");
    return out;
  }
  r.keys(n, "lambdas", {"from", "to", "count"});
  if (!n.IsMap()) return out;
  const auto from = r.positive(n, "from", "lambdas.from", true);
  const auto to = r.positive(n, "to", "lambdas.to", true);
  const auto count = r.get<int>(n, "count", "lambdas.count");
  if (!from) r.issue(n, "lambdas.from", "required");
  if (!to) r.issue(n, "lambdas.to", "required");
  if (!count || *count < 1) {
    r.issue(n, "lambdas.count", "required, >= 1");
    return out;
  }
  if (from && to) {
    if (*to < *from) r.issue(n, "lambdas.to", "must be >= lambdas.from");
    for (int i = 0; i < *count; ++i) {
      out.push_back(*count == 1 ? *from : *from + (*to - *from) * i / (*count - 1));
    }
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<SchemaIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

bool known_command(const std::string& name) {
  return std::find(std::begin(kCommands), std::end(kCommands), name) != std::end(kCommands);
}

ExperimentConfig parse_config_text(const std::string& text, bool strict) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, "", e.msg}});
  }
  ExperimentConfig cfg;
  cfg.source = text;
  if (!root || root.IsNull()) throw ConfigError({{0, "", "empty config"}});

  Reader r(strict);
  r.keys(root, "", {"command", "seed", "trials", "threads", "out", "space", "codomain", "map",
                    "intensity", "R", "window", "windows", "lambdas", "crossing", "bracket",
                    "qi", "growth", "report"});
  if (!root.IsMap()) throw ConfigError(r.issues_);

  if (auto c = r.get<std::string>(root, "command", "command")) {
    if (known_command(*c)) {
      cfg.command = *c;
    } else {
      r.issue(root["command"], "command", "unknown command '" + *c + "'");
    }
  }
  cfg.seed = r.get<std::uint64_t>(root, "seed", "seed");
  if (auto t = r.get<long long>(root, "trials", "trials")) {
    if (*t < 1) {
      r.issue(root["trials"], "trials", "must be >= 1");
    } else {
      cfg.trials = static_cast<std::size_t>(*t);
    }
  }
  if (auto t = r.get<int>(root, "threads", "threads")) {
    if (*t < 1) {
      r.issue(root["threads"], "threads", "must be >= 1");
    } else {
      cfg.threads = static_cast<unsigned>(*t);
    }
  }
  if (auto o = r.get<std::string>(root, "out", "out")) cfg.out = *o;
  if (root["space"]) cfg.space = read_space(r, root["space"], "space");
  if (root["codomain"]) cfg.codomain = read_space(r, root["codomain"], "codomain");

  if (const auto m = root["map"]) {
    MapDecl d;
    r.keys(m, "map", {"kind", "alpha", "beta", "gamma", "double_gamma"});
    if (m.IsMap()) {
      const auto k = r.get<std::string>(m, "kind", "map.kind");
      static const std::set<std::string> kinds = {"identity", "std-to-king", "king-to-std",
                                                  "rounding", "net"};
      if (!k) {
        r.issue(m, "map.kind", "required");
      } else if (!kinds.count(*k)) {
        r.issue(m["kind"], "map.kind", "unknown map '" + *k + "'");
      } else {
        d.kind = *k;
      }
      d.alpha = r.positive(m, "alpha", "map.alpha");
      d.beta = r.positive(m, "beta", "map.beta", true);
      d.gamma = r.positive(m, "gamma", "map.gamma", true);
      if (auto g = r.get<bool>(m, "double_gamma", "map.double_gamma")) d.double_gamma = *g;
      if (d.alpha && *d.alpha < 1.0) r.issue(m["alpha"], "map.alpha", "must be >= 1");
    }
    cfg.map = d;
  }

  if (const auto n = root["intensity"]) {
    r.keys(n, "intensity", {"kind", "lambda", "amplitude"});
    if (n.IsMap()) {
      if (auto k = r.get<std::string>(n, "kind", "intensity.kind")) {
        if (*k == "homogeneous" || *k == "sine") {
          cfg.intensity.kind = *k;
        } else {
          r.issue(n["kind"], "intensity.kind", "unknown intensity kind '" + *k + "'");
        }
      }
      if (auto l = r.positive(n, "lambda", "intensity.lambda")) {
        cfg.intensity.lambda = *l;
        cfg.has_lambda = true;
      }
      if (auto a = r.get<double>(n, "amplitude", "intensity.amplitude")) {
        if (!(*a >= 0.0 && *a < 1.0)) {
          r.issue(n["amplitude"], "intensity.amplitude", "must lie in [0, 1)");
        } else {
          cfg.intensity.amplitude = *a;
        }
      }
    }
  }

  if (auto v = r.positive(root, "R", "R", true)) cfg.R = *v;
  if (root["window"] && root["windows"]) {
    r.issue(root["windows"], "windows", "give either window or windows");
  }
  if (auto w = r.positive(root, "window", "window")) cfg.windows = {*w};
  if (const auto ws = root["windows"]) {
    if (!ws.IsSequence() || ws.size() == 0) {
      r.issue(ws, "windows", "expected a non-empty list of window radii");
    } else {
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto field = "windows[" + std::to_string(i) + "]";
        try {
          const double v = ws[i].as<double>();
          if (!(v > 0.0)) {
            r.issue(ws[i], field, "must be > 0");
          } else {
            cfg.windows.push_back(v);
          }
        } catch (const YAML::Exception&) {
          r.issue(ws[i], field, "expected a number");
        }
      }
    }
  }
  if (root["lambdas"]) cfg.lambdas = read_lambdas(r, root["lambdas"]);

  if (const auto c = root["crossing"]) {
    r.keys(c, "crossing", {"core_fraction", "shell_offset"});
    if (c.IsMap()) {
      if (auto f = r.positive(c, "core_fraction", "crossing.core_fraction")) {
        if (*f >= 1.0) {
          r.issue(c["core_fraction"], "crossing.core_fraction", "must be < 1");
        } else {
          cfg.core_fraction = *f;
        }
      }
      cfg.shell_offset = r.positive(c, "shell_offset", "crossing.shell_offset", true);
    }
  }
  if (const auto b = root["bracket"]) {
    r.keys(b, "bracket", {"low", "high", "tolerance", "stop_on_ci"});
    if (b.IsMap()) {
      const auto lo = r.positive(b, "low", "bracket.low", true);
      const auto hi = r.positive(b, "high", "bracket.high");
      if (!lo) r.issue(b, "bracket.low", "required");
      if (!hi) r.issue(b, "bracket.high", "required");
      if (lo && hi) {
        cfg.bracket_low = *lo;
        cfg.bracket_high = *hi;
        if (!(*lo < *hi)) r.issue(b["high"], "bracket.high", "must exceed bracket.low");
      }
      if (auto t = r.positive(b, "tolerance", "bracket.tolerance")) cfg.tolerance = *t;
      if (auto c = r.get<bool>(b, "stop_on_ci", "bracket.stop_on_ci")) cfg.stop_on_ci = *c;
    }
  }
  if (const auto q = root["qi"]) {
    r.keys(q, "qi", {"pairs", "measure_samples"});
    if (q.IsMap()) {
      if (auto p = r.get<long long>(q, "pairs", "qi.pairs")) {
        if (*p < 1) r.issue(q["pairs"], "qi.pairs", "must be >= 1");
        else cfg.pairs = static_cast<std::size_t>(*p);
      }
      if (auto p = r.get<long long>(q, "measure_samples", "qi.measure_samples")) {
        if (*p < 1) r.issue(q["measure_samples"], "qi.measure_samples", "must be >= 1");
        else cfg.measure_samples = static_cast<std::size_t>(*p);
      }
    }
  }
  if (const auto g = root["growth"]) {
    r.keys(g, "growth", {"n_max"});
    if (g.IsMap()) {
      if (auto n = r.get<int>(g, "n_max", "growth.n_max")) {
        if (*n < 4) r.issue(g["n_max"], "growth.n_max", "must be >= 4");
        else cfg.n_max = *n;
      }
    }
  }
  if (const auto rep = root["report"]) {
    r.keys(rep, "report", {"coordinates", "labels"});
    if (rep.IsMap()) {
      if (auto c = r.get<bool>(rep, "coordinates", "report.coordinates")) cfg.coordinates = *c;
      if (auto l = r.get<bool>(rep, "labels", "report.labels")) cfg.labels = *l;
    }
  }

  if (!r.issues_.empty()) throw ConfigError(r.issues_);
  for (const auto& w : r.warnings_) cfg.warnings.push_back(w.text());
  if (!cfg.space.padding) cfg.space.padding = cfg.R;
  return cfg;
}

ExperimentConfig parse_config(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "", "cannot read config file " + path}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), strict);
}

void validate_for_command(const ExperimentConfig& cfg) {
  std::vector<SchemaIssue> issues;
  auto need = [&](bool ok, std::string field, std::string message) {
    if (!ok) issues.push_back({0, std::move(field), std::move(message)});
  };
  const auto& c = cfg.command;
  need(known_command(c), "command", c.empty() ? "required" : "unknown command '" + c + "'");
  if (c == "invariance" || c == "qi-check") {
    if (!cfg.map || cfg.map->kind.empty()) {
      throw ConfigError({{0, "map", "command requires map"}});
    }
  }
  if (c == "run" || c == "invariance") {
    need(cfg.has_lambda, "intensity.lambda", "required by " + c);
  }
  if (c == "sweep") need(!cfg.lambdas.empty(), "lambdas", "required by sweep");
  if (c == "lambda-c") need(cfg.bracket_high > 0.0, "bracket", "required by lambda-c");
  if (c == "invariance") {
    need(cfg.windows.empty() || cfg.windows.size() == 2, "windows",
         "invariance takes exactly two windows (small, large)");
    if (cfg.windows.size() == 2) {
      need(cfg.windows[0] < cfg.windows[1], "windows", "must be increasing");
    }
  }
  if (c == "growth") need(cfg.space.kind == "cayley", "space.kind", "growth needs a cayley space");
  if (cfg.intensity.kind == "sine") {
    need(cfg.space.kind == "euclidean", "intensity.kind", "sine intensity needs a euclidean space");
    need(c == "run", "intensity.kind", "sine intensity is only sampled by run");
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace percolab::cli
