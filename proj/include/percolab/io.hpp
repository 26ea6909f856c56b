#ifndef PERCOLAB_IO_HPP_
#define PERCOLAB_IO_HPP_

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "percolab/boolean_model.hpp"
#include "percolab/invariance.hpp"
#include "percolab/phase.hpp"
#include "percolab/quasi_isometry.hpp"

namespace percolab {

inline constexpr const char* kPhaseCsvHeader =
    "lambda,R,L,trials,crossings,p_hat,ci_low,ci_high,seed";

//! Shortest text that round-trips the double.
inline std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

//! FNV-1a, used to fingerprint config text.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string provenance_line(std::uint64_t seed, std::uint64_t config_hash) {
  return "# seed=" + std::to_string(seed) + " config_hash=" + hex64(config_hash);
}

inline std::string phase_csv(const std::vector<PhaseRow>& rows, std::uint64_t seed,
                             std::uint64_t config_hash) {
  std::string out = provenance_line(seed, config_hash) + "\n" + kPhaseCsvHeader + "\n";
  for (const auto& r : rows) {
    out += format_number(r.lambda) + ',' + format_number(r.R) + ',' + format_number(r.L) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.crossings) + ',' +
           format_number(r.p_hat) + ',' + format_number(r.ci_low) + ',' +
           format_number(r.ci_high) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

inline std::string point_text(const Vec2& p) { return format_number(p.x) + ' ' + format_number(p.y); }
inline std::string point_text(const Polar& p) { return format_number(p.r) + ' ' + format_number(p.theta); }
inline std::string point_text(const GroupElement& g) { return to_string(g); }
inline std::string point_text(const NetVertex& v) { return std::to_string(v.index); }

inline nlohmann::json point_json(const Vec2& p) { return {p.x, p.y}; }
inline nlohmann::json point_json(const Polar& p) { return {p.r, p.theta}; }
inline nlohmann::json point_json(const GroupElement& g) { return g; }
inline nlohmann::json point_json(const NetVertex& v) { return v.index; }

//! mu* table: one row per cell.
template <MetricMeasureSpace Cod>
std::string measure_table_csv(const InducedMeasureTable<Cod>& table, std::uint64_t seed,
                              std::uint64_t config_hash) {
  std::string out = provenance_line(seed, config_hash) + "\n" +
                    "cell_index,center,measure_prime,measure_star\n";
  for (const auto& c : table.partition.cells()) {
    out += std::to_string(c.index) + ',' + point_text(c.center) + ',' +
           format_number(c.measure_prime) + ',' + format_number(c.measure_star) + '\n';
  }
  return out;
}

struct ClusterJsonOptions {
  bool labels = false;
  bool coordinates = false;
};

template <MetricMeasureSpace S>
nlohmann::json cluster_json(const BooleanModel<S>& model, const ClusterReport& report,
                            const ClusterJsonOptions& opts = {}) {
  nlohmann::json j;
  j["space"] = to_string(S::kind);
  j["radius"] = model.radius;
  j["window"] = {{"radius", model.space.window().radius},
                 {"padding", model.space.window().padding},
                 {"center", point_json(model.space.window().center)}};
  j["points"] = model.config.size();
  j["components"] = report.component_count();
  j["sizes"] = report.sizes;
  j["max_extent"] = report.max_extent;
  j["crossing"] = report.crossing;
  if (opts.labels) j["labels"] = report.labels;
  if (opts.coordinates) {
    auto coords = nlohmann::json::array();
    for (const auto& p : model.config.points) coords.push_back(point_json(p));
    j["coordinates"] = std::move(coords);
  }
  return j;
}

inline nlohmann::json row_json(const PhaseRow& r) {
  return {{"lambda", r.lambda}, {"R", r.R},         {"L", r.L},
          {"trials", r.trials}, {"crossings", r.crossings}, {"p_hat", r.p_hat},
          {"ci_low", r.ci_low}, {"ci_high", r.ci_high},     {"seed", r.seed}};
}

inline nlohmann::json verdict_json(const PhaseVerdict& v) {
  return {{"verdict", to_string(v.verdict)}, {"small", row_json(v.small)}, {"large", row_json(v.large)}};
}

inline nlohmann::json mm_json(const MmConstants& m) {
  nlohmann::json j{{"C1", m.C1},       {"C2", m.C2},       {"C3", m.C3},
                   {"C4", m.C4},       {"Cbar1", m.Cbar1}, {"Cbar2", m.Cbar2},
                   {"cells", m.cells}, {"compatible", m.compatible}};
  if (!m.compatible) j["violation"] = m.violation;
  return j;
}

inline nlohmann::json leg_json(const LegReport& leg) {
  return {{"direction", to_string(leg.direction)},
          {"radius", leg.radius},
          {"at_lambda_low", verdict_json(leg.at_low)},
          {"at_lambda_high", verdict_json(leg.at_high)},
          {"verdict", to_string(leg.verdict)}};
}

template <MetricMeasureSpace Cod>
nlohmann::json invariance_json(const InvarianceReport<Cod>& r, const std::string& table_path) {
  return {{"map", r.map_name},
          {"params", {{"alpha", r.params.alpha}, {"beta", r.params.beta}, {"gamma", r.params.gamma}}},
          {"lambda", r.lambda},
          {"R", r.R},
          {"seed", r.seed},
          {"domain", verdict_json(r.domain)},
          {"measure",
           {{"table", table_path},
            {"cells", r.table.partition.size()},
            {"partition_gamma", r.table.partition.gamma()},
            {"partition_seed", r.table.partition.seed()},
            {"domain_measure", r.table.domain_measure},
            {"total_star", r.table.total_star()},
            {"unassigned", r.table.unassigned},
            {"mm", mm_json(r.mm)}}},
          {"lambda_bracket", {r.lambda_low, r.lambda_high}},
          {"supercritical_leg", leg_json(r.supercritical)},
          {"subcritical_leg", leg_json(r.subcritical)},
          {"codomain_verdict", to_string(r.codomain_verdict)},
          {"agree", r.agree},
          {"opposite", r.opposite_verdicts},
          {"coupled",
           {{"domain_points", r.coupled_domain_points},
            {"codomain_points", r.coupled_codomain_points},
            {"counts_match", r.coupled_counts_match}}}};
}

//! Write to a sibling temp file, then rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace percolab

#endif  // PERCOLAB_IO_HPP_
