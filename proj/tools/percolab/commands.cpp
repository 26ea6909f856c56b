#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <utility>

#include "percolab/percolab.hpp"

namespace percolab::cli {

namespace fs = std::filesystem;

SeedChoice resolve_seed(const std::optional<std::uint64_t>& flag, const char* env,
                        const std::optional<std::uint64_t>& config) {
  if (flag) return {*flag, "flag"};
  if (env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string text(env);
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw ConfigError({{0, "PERCOLAB_SEED", "expected an unsigned integer, got '" + text + "'"}});
    }
    return {v, "env"};
  }
  if (config) return {*config, "config"};
  std::random_device rd;
  const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return {v, "generated"};
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.trials) cfg.trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.out = *o.out;
  if (o.window) {
    // invariance keeps its two-window shape: (L/2, L)
    if (cfg.command == "invariance") {
      cfg.windows = {*o.window / 2.0, *o.window};
    } else {
      cfg.windows = {*o.window};
    }
  }
}

namespace {

std::vector<double> windows_of(const ExperimentConfig& cfg) {
  if (!cfg.windows.empty()) return cfg.windows;
  if (cfg.command == "invariance") return {20.0, 40.0};
  return {20.0};
}

nlohmann::json space_echo(const SpaceDecl& s) {
  nlohmann::json j{{"kind", s.kind}};
  if (s.kind == "cayley") j["group"] = s.group;
  if (s.kind == "net") {
    j["epsilon"] = s.net_epsilon;
    j["extent"] = s.net_extent;
  }
  if (s.padding) j["padding"] = *s.padding;
  if (s.radius) j["radius"] = *s.radius;
  return j;
}

}  // namespace

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json j{{"command", cfg.command},
                   {"trials", cfg.trials},
                   {"R", cfg.R},
                   {"windows", windows_of(cfg)},
                   {"space", space_echo(cfg.space)},
                   {"crossing", {{"core_fraction", cfg.core_fraction}}}};
  if (cfg.shell_offset) j["crossing"]["shell_offset"] = *cfg.shell_offset;
  if (cfg.codomain) j["codomain"] = space_echo(*cfg.codomain);
  if (cfg.map) {
    nlohmann::json m{{"kind", cfg.map->kind}, {"double_gamma", cfg.map->double_gamma}};
    if (cfg.map->alpha) m["alpha"] = *cfg.map->alpha;
    if (cfg.map->beta) m["beta"] = *cfg.map->beta;
    if (cfg.map->gamma) m["gamma"] = *cfg.map->gamma;
    j["map"] = m;
  }
  if (cfg.has_lambda) {
    j["intensity"] = {{"kind", cfg.intensity.kind}, {"lambda", cfg.intensity.lambda}};
    if (cfg.intensity.kind == "sine") j["intensity"]["amplitude"] = cfg.intensity.amplitude;
  }
  if (!cfg.lambdas.empty()) j["lambdas"] = cfg.lambdas;
  if (cfg.command == "lambda-c") {
    j["bracket"] = {{"low", cfg.bracket_low},
                    {"high", cfg.bracket_high},
                    {"tolerance", cfg.tolerance},
                    {"stop_on_ci", cfg.stop_on_ci}};
  }
  if (cfg.command == "qi-check" || cfg.command == "invariance") {
    j["qi"] = {{"pairs", cfg.pairs}, {"measure_samples", cfg.measure_samples}};
  }
  if (cfg.command == "growth") j["growth"] = {{"n_max", cfg.n_max}};
  if (cfg.command == "run") j["report"] = {{"coordinates", cfg.coordinates}, {"labels", cfg.labels}};
  return j;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(config_echo(cfg).dump()); }

nlohmann::json RunResult::to_json() const {
  return {{"config", config},
          {"seed", seed},
          {"seed_source", seed_source},
          {"outputs", outputs},
          {"wall_clock_seconds", wall_clock},
          {"version", version},
          {"verdicts", verdicts}};
}

namespace {

GroupSpec group_of(const std::string& name) {
  if (name == "z") return GroupSpec::free_abelian(1);
  if (name == "z2") return GroupSpec::free_abelian(2);
  if (name == "z3") return GroupSpec::free_abelian(3);
  if (name == "z4") return GroupSpec::free_abelian(4);
  if (name == "z2-king") return GroupSpec::z2_king();
  if (name == "free2") return GroupSpec::free_group(2);
  if (name == "free3") return GroupSpec::free_group(3);
  if (name == "heisenberg") return GroupSpec::heisenberg();
  throw ConfigError({{0, "space.group", "unknown group '" + name + "'"}});
}

struct Context {
  const ExperimentConfig& cfg;
  std::uint64_t seed;
  std::uint64_t hash;
  RunResult& result;

  PhaseOptions phase() const {
    PhaseOptions o;
    o.threads = cfg.threads;
    o.geometry.core_fraction = cfg.core_fraction;
    o.geometry.shell_offset = cfg.shell_offset;
    return o;
  }

  double padding() const { return cfg.space.padding.value_or(cfg.R); }

  void write(const std::string& name, const std::string& body) {
    const fs::path path = fs::path(cfg.out) / name;
    write_atomic(path, body);
    result.outputs.push_back(path.string());
  }

  // JSON cannot carry a comment line; the same text leads the document.
  void write_json(const std::string& name, const nlohmann::json& body) {
    nlohmann::ordered_json doc;
    doc["provenance"] = provenance_line(seed, hash).substr(2);
    for (const auto& [k, v] : body.items()) doc[k] = v;
    write(name, doc.dump(2) + "\n");
  }
};

template <class Fn>
void with_space(const Context& ctx, double L, Fn&& fn) {
  const auto& d = ctx.cfg.space;
  const double pad = ctx.padding();
  if (d.kind == "euclidean") {
    fn(EuclideanPlane(WindowSpec<Vec2>{{0.0, 0.0}, L, pad}));
  } else if (d.kind == "hyperbolic") {
    fn(HyperbolicDisk(WindowSpec<Polar>{{0.0, 0.0}, L, pad}));
  } else if (d.kind == "cayley") {
    auto group = group_of(d.group);
    const auto e = group.identity();
    fn(CayleyGraph(std::move(group), WindowSpec<GroupElement>{e, L, pad}));
  } else {
    const EuclideanPlane ambient(WindowSpec<Vec2>{{0.0, 0.0}, d.net_extent, 0.0});
    const auto net = epsilon_net(ambient, d.net_epsilon, ctx.seed);
    fn(resize_window(net_graph(net), L, pad));
  }
}

void need_domain(const ExperimentConfig& cfg, const std::string& kind, const std::string& group = {}) {
  const bool ok = cfg.space.kind == kind && (group.empty() || cfg.space.group == group);
  if (!ok) {
    throw ConfigError({{0, "space", "map " + cfg.map->kind + " needs a " + kind +
                                        (group.empty() ? "" : " " + group) + " domain"}});
  }
}

template <class F>
void override_params(F& map, const MapDecl& d) {
  if (d.alpha) map.params.alpha = *d.alpha;
  if (d.beta) map.params.beta = *d.beta;
  if (d.gamma) map.params.gamma = *d.gamma;
}

//! Builds the configured map over the domain window L and hands it to fn.
template <class Fn>
void with_map(const Context& ctx, double L, Fn&& fn) {
  const auto& cfg = ctx.cfg;
  const auto& d = *cfg.map;
  const double pad = ctx.padding();
  const SpaceDecl cod = cfg.codomain.value_or(SpaceDecl{});
  auto int_window = [](double r) { return std::max(1.0, r); };
  if (d.kind == "identity") {
    with_space(ctx, L, [&](const auto& space) {
      auto F = identity_map(space);
      override_params(F, d);
      fn(F);
    });
  } else if (d.kind == "std-to-king" || d.kind == "king-to-std") {
    const bool forward = d.kind == "std-to-king";
    need_domain(cfg, "cayley", forward ? "z2" : "z2-king");
    // std ball of radius L sits inside the king ball of radius L, and the king
    // ball of radius L inside the std ball of radius 2L.
    const double r = cod.radius.value_or(int_window(forward ? std::floor(L / 2.0) : L));
    const double reach = forward ? L : 2.0 * L;
    const double cpad = cod.padding.value_or(std::max(pad, reach - r));
    const WindowSpec<GroupElement> dw{{0, 0}, L, pad};
    const WindowSpec<GroupElement> cw{{0, 0}, r, cpad};
    auto F = forward ? std_to_king(dw, cw) : king_to_std(dw, cw);
    override_params(F, d);
    fn(F);
  } else if (d.kind == "rounding") {
    need_domain(cfg, "euclidean");
    // Unit squares of lattice points with |z|_1 <= r stay inside the disk.
    const double r = cod.radius.value_or(int_window(std::floor(L - std::sqrt(0.5))));
    const double cpad = cod.padding.value_or(std::max(pad, std::ceil(L * std::sqrt(2.0) + 1.0) - r));
    auto F = rounding_map(WindowSpec<Vec2>{{0.0, 0.0}, L, pad}, WindowSpec<GroupElement>{{0, 0}, r, cpad});
    override_params(F, d);
    fn(F);
  } else {
    need_domain(cfg, "euclidean");
    const double eps = cod.net_epsilon;
    const EuclideanPlane ambient(WindowSpec<Vec2>{{0.0, 0.0}, L, pad});
    const auto net = epsilon_net(ambient, eps, ctx.seed);
    auto F = net_map(net, euclidean_net_params(net.epsilon, net.rho));
    override_params(F, d);
    fn(F);
  }
}

void cmd_run(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double L = windows_of(cfg).front();
  with_space(ctx, L, [&](const auto& space) {
    using S = std::decay_t<decltype(space)>;
    const auto opts = ctx.phase();
    const double lambda = cfg.intensity.lambda;
    PointConfiguration<point_t<S>> config;
    if (cfg.intensity.kind == "sine") {
      if constexpr (std::is_same_v<S, EuclideanPlane>) {
        // lambda (1 + a sin x1) by thinning the dominating homogeneous field.
        const double a = cfg.intensity.amplitude;
        CrossingExplorer<S> explorer(space, cfg.R, opts.geometry, opts.tile);
        const auto top = explorer.materialize(lambda * (1.0 + a), ctx.seed, 0);
        config = thin(top, [a](const Vec2& p) { return (1.0 + a * std::sin(p.x)) / (1.0 + a); },
                      derive_seed(ctx.seed, 0, 0, Purpose::Thinning));
      }
    } else {
      CrossingExplorer<S> explorer(space, cfg.R, opts.geometry, opts.tile);
      config = explorer.materialize(lambda, ctx.seed, 0);
    }
    const BooleanModel<S> model{space, std::move(config), cfg.R};
    const auto report = analyze(model, opts.geometry);
    ctx.write_json("cluster.json", cluster_json(model, report, {cfg.labels, cfg.coordinates}));
    ctx.result.verdicts = {{"crossing", report.crossing},
                           {"points", model.config.size()},
                           {"components", report.component_count()}};
  });
}

void cmd_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<PhaseRow> rows;
  nlohmann::json series = nlohmann::json::array();
  for (const double L : windows_of(cfg)) {
    with_space(ctx, L, [&](const auto& space) {
      const auto curve = sweep(space, cfg.lambdas, cfg.R, cfg.trials, ctx.seed, ctx.phase());
      series.push_back({{"L", L}, {"monotone", curve.monotone()}});
      rows.insert(rows.end(), curve.rows.begin(), curve.rows.end());
    });
  }
  ctx.write("phase.csv", phase_csv(rows, ctx.seed, ctx.hash));
  ctx.result.verdicts = {{"series", series}};
}

void cmd_lambda_c(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<PhaseRow> rows;
  nlohmann::json estimates = nlohmann::json::array();
  BisectionConfig bis{cfg.bracket_low, cfg.bracket_high, cfg.tolerance};
  bis.stop_on_ci = cfg.stop_on_ci;
  for (const double L : windows_of(cfg)) {
    with_space(ctx, L, [&](const auto& space) {
      using S = std::decay_t<decltype(space)>;
      const auto est = estimate_lambda_c(space, cfg.R, cfg.trials, ctx.seed, bis, ctx.phase());
      nlohmann::json e{{"L", L},
                       {"lambda_c", est.lambda_c},
                       {"bracket", {est.low, est.high}},
                       {"iterations", est.iterations}};
      if constexpr (GraphSpace<S>) e["p_c"] = bernoulli_retention(est.lambda_c, 1.0);
      estimates.push_back(e);
      rows.insert(rows.end(), est.rows.begin(), est.rows.end());
    });
  }
  ctx.write("lambda_c.csv", phase_csv(rows, ctx.seed, ctx.hash));
  ctx.write_json("lambda_c.json", {{"R", cfg.R}, {"estimates", estimates}});
  ctx.result.verdicts = {{"estimates", estimates}};
}

template <class PD, class PC>
nlohmann::json verification_json(const QiVerification<PD, PC>& v) {
  nlohmann::json j{{"status", to_string(v.status)},
                   {"pairs_tested", v.pairs_tested},
                   {"codomain_tested", v.codomain_tested}};
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {{"axiom", to_string(w.axiom)}, {"x", point_json(w.x)}, {"y", point_json(w.y)},
                    {"z", point_json(w.z)},        {"observed", w.observed}, {"bound", w.bound}};
  }
  return j;
}

InduceOptions induce_options(const ExperimentConfig& cfg) {
  InduceOptions o;
  o.measure_samples = cfg.measure_samples;
  return o;
}

void cmd_qi_check(Context& ctx) {
  const auto& cfg = ctx.cfg;
  with_map(ctx, windows_of(cfg).back(), [&](auto& F) {
    Stream stream = make_stream(ctx.seed, 0, 0, Purpose::Sampling);
    const auto verification = qi_check(F, cfg.pairs, stream);
    const auto opts = induce_options(cfg);
    const std::uint64_t pseed = derive_seed(ctx.seed, 0, 0, Purpose::Partition);
    auto table = induce_measure_table(F, induce_partition(F, pseed, opts), pseed, opts);
    const auto mm = mm_check(table);
    ctx.write("mu_star.csv", measure_table_csv(table, ctx.seed, ctx.hash));
    nlohmann::json body{{"map", F.name},
                        {"params", {{"alpha", F.params.alpha}, {"beta", F.params.beta}, {"gamma", F.params.gamma}}},
                        {"verification", verification_json(verification)},
                        {"radius_forward", radius_forward(cfg.R, F.params.alpha, F.params.beta)},
                        {"domain_measure", table.domain_measure},
                        {"total_star", table.total_star()},
                        {"unassigned", table.unassigned},
                        {"mm", mm_json(mm)}};
    ctx.write_json("qi_check.json", body);
    ctx.result.verdicts = {{"qi", to_string(verification.status)}, {"mm_compatible", mm.compatible}};
  });
}

void cmd_invariance(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ws = windows_of(cfg);
  with_map(ctx, ws.back(), [&](auto& F) {
    InvarianceOptions opts;
    opts.L_small = ws.front();
    opts.L_large = ws.back();
    opts.trials = cfg.trials;
    opts.phase = ctx.phase();
    opts.induce = induce_options(cfg);
    opts.transport.double_gamma = cfg.map->double_gamma;
    const auto rep = invariance_experiment(F, cfg.intensity.lambda, cfg.R, ctx.seed, opts);
    ctx.write("mu_star.csv", measure_table_csv(rep.table, ctx.seed, ctx.hash));
    std::vector<PhaseRow> rows{rep.domain.small, rep.domain.large};
    for (const auto* leg : {&rep.supercritical, &rep.subcritical}) {
      for (const auto* v : {&leg->at_low, &leg->at_high}) {
        rows.push_back(v->small);
        rows.push_back(v->large);
      }
    }
    ctx.write("invariance.csv", phase_csv(rows, ctx.seed, ctx.hash));
    ctx.write_json("invariance.json", invariance_json(rep, "mu_star.csv"));
    ctx.result.verdicts = {{"domain", to_string(rep.domain.verdict)},
                           {"codomain", to_string(rep.codomain_verdict)},
                           {"agree", rep.agree},
                           {"opposite", rep.opposite_verdicts}};
  });
}

void cmd_growth(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto est = growth_degree(group_of(cfg.space.group), cfg.n_max);
  std::string csv = provenance_line(ctx.seed, ctx.hash) + "\nn,ball_size\n";
  for (const auto& [n, size] : est.ball_sizes) csv += std::to_string(n) + ',' + std::to_string(size) + '\n';
  ctx.write("growth.csv", csv);
  ctx.write_json("growth.json", {{"group", cfg.space.group}, {"n_max", cfg.n_max},
                                 {"fitted_degree", est.fitted_degree}});
  ctx.result.verdicts = {{"fitted_degree", est.fitted_degree}};
}

}  // namespace

RunResult run(const ExperimentConfig& cfg, const SeedChoice& seed) {
  validate_for_command(cfg);
  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  result.config = config_echo(cfg);
  result.seed = seed.seed;
  result.seed_source = seed.source;
  result.version = kVersion;
  Context ctx{cfg, seed.seed, config_hash(cfg), result};
  const auto& c = cfg.command;
  if (c == "run") cmd_run(ctx);
  else if (c == "sweep") cmd_sweep(ctx);
  else if (c == "lambda-c") cmd_lambda_c(ctx);
  else if (c == "qi-check") cmd_qi_check(ctx);
  else if (c == "invariance") cmd_invariance(ctx);
  else cmd_growth(ctx);
  result.wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const fs::path summary = fs::path(cfg.out) / "run_result.json";
  result.outputs.push_back(summary.string());
  write_atomic(summary, result.to_json().dump(2) + "\n");
  return result;
}

}  // namespace percolab::cli
