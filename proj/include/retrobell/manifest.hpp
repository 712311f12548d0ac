#ifndef RETROBELL_MANIFEST_HPP
#define RETROBELL_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "retrobell/registry.hpp"

namespace retrobell {

using nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20260801;

// Axis grid: count points from start (inclusive) stepping (stop-start)/count,
// i.e. the half-open convention used for setting grids on [0, pi).
struct GridSpec {
  double start = 0.0;
  double stop = kPi;
  int count = 16;
};

// Declarative description of one run of the tool.
struct ExperimentManifest {
  std::string model = "qm";
  json model_params = json::object();
  std::string task = "verify";  // joint | chsh | scan | mi | nosignal | sample | verify
  std::vector<double> settings;  // explicit angle list, task-dependent arity
  std::optional<GridSpec> grid;
  std::string ensemble = "quadruple";  // mi: "quadruple" | "grid"
  int ensemble_grid_n = 16;
  int probe_count = 16;
  int scan_grid_n = 16;
  int scan_refine_iters = 40;
  std::uint64_t trials = 0;  // 0: no Monte Carlo stage
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::vector<std::string> verify_models;    // empty: the four built-ins
  std::string output_path;
  std::string output_format = "json";
};

inline const std::vector<std::string>& manifest_tasks() {
  static const std::vector<std::string> tasks{"joint",    "chsh",   "scan",  "mi",
                                              "nosignal", "sample", "verify"};
  return tasks;
}

inline void validate_manifest(const ExperimentManifest& m) {
  find_model(m.model);  // throws for unregistered names
  bool known_task = false;
  for (const std::string& t : manifest_tasks()) known_task |= (t == m.task);
  if (!known_task) throw std::invalid_argument("manifest: unknown task '" + m.task + "'");
  for (double angle : m.settings) {
    if (!std::isfinite(angle)) throw std::invalid_argument("manifest: non-finite setting");
  }
  if (m.grid && m.grid->count < 1) throw std::invalid_argument("manifest: grid count must be >= 1");
  if (m.ensemble != "quadruple" && m.ensemble != "grid") {
    throw std::invalid_argument("manifest: unknown ensemble '" + m.ensemble + "'");
  }
  if (m.ensemble_grid_n < 1 || m.probe_count < 1 || m.scan_grid_n < 1 ||
      m.scan_refine_iters < 0) {
    throw std::invalid_argument("manifest: counts must be >= 1");
  }
  if ((m.task == "sample") && m.trials == 0) {
    throw std::invalid_argument("manifest: sample task needs trials >= 1");
  }
  for (const auto& [name, tol] : m.tolerances) {
    if (!(tol > 0.0)) {
      throw std::invalid_argument("manifest: tolerance '" + name + "' must be > 0");
    }
  }
  for (const std::string& name : m.verify_models) find_model(name);
  if (m.output_format != "json" && m.output_format != "csv") {
    throw std::invalid_argument("manifest: unknown output format '" + m.output_format + "'");
  }
}

inline json manifest_to_json(const ExperimentManifest& m) {
  json j;
  j["model"] = m.model;
  j["model_params"] = m.model_params;
  j["task"] = m.task;
  json settings = json::object();
  if (!m.settings.empty()) settings["angles"] = m.settings;
  if (m.grid) {
    settings["grid"] = {{"start", m.grid->start}, {"stop", m.grid->stop}, {"count", m.grid->count}};
  }
  j["settings"] = settings;
  j["ensemble"] = {{"kind", m.ensemble}, {"grid_n", m.ensemble_grid_n}};
  j["probes"] = m.probe_count;
  j["scan"] = {{"grid_n", m.scan_grid_n}, {"refine_iters", m.scan_refine_iters}};
  j["trials"] = m.trials;
  j["seed"] = m.seed;
  j["tolerances"] = m.tolerances;
  j["verify_models"] = m.verify_models;
  j["output"] = {{"path", m.output_path}, {"format", m.output_format}};
  return j;
}

inline ExperimentManifest manifest_from_json(const json& j) {
  ExperimentManifest m;
  m.model = j.value("model", m.model);
  m.model_params = j.value("model_params", json::object());
  m.task = j.value("task", m.task);
  if (j.contains("settings")) {
    const json& s = j.at("settings");
    if (s.contains("angles")) m.settings = s.at("angles").get<std::vector<double>>();
    if (s.contains("grid")) {
      GridSpec g;
      g.start = s.at("grid").value("start", g.start);
      g.stop = s.at("grid").value("stop", g.stop);
      g.count = s.at("grid").value("count", g.count);
      m.grid = g;
    }
  }
  if (j.contains("ensemble")) {
    m.ensemble = j.at("ensemble").value("kind", m.ensemble);
    m.ensemble_grid_n = j.at("ensemble").value("grid_n", m.ensemble_grid_n);
  }
  m.probe_count = j.value("probes", m.probe_count);
  if (j.contains("scan")) {
    m.scan_grid_n = j.at("scan").value("grid_n", m.scan_grid_n);
    m.scan_refine_iters = j.at("scan").value("refine_iters", m.scan_refine_iters);
  }
  m.trials = j.value("trials", m.trials);
  m.seed = j.value("seed", m.seed);
  if (j.contains("tolerances")) {
    m.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  }
  if (j.contains("verify_models")) {
    m.verify_models = j.at("verify_models").get<std::vector<std::string>>();
  }
  if (j.contains("output")) {
    m.output_path = j.at("output").value("path", m.output_path);
    m.output_format = j.at("output").value("format", m.output_format);
  }
  validate_manifest(m);
  return m;
}

// FNV-1a 64 over the canonical (sorted-key) serialization.
inline std::string manifest_digest(const ExperimentManifest& m) {
  const std::string canonical = manifest_to_json(m).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// One asserted comparison, carrying its tolerance and both sides.
struct CheckVerdict {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string relation;  // "<=", ">", "=="
  std::string note;
};

inline json verdict_to_json(const CheckVerdict& v) {
  return {{"name", v.name},   {"passed", v.passed},     {"observed", v.observed},
          {"bound", v.bound}, {"relation", v.relation}, {"note", v.note}};
}

// Computed results of one task plus its verdicts.  wall_seconds is the one
// volatile field; the canonical form omits it so determinism comparisons
// and diffs stay bit-meaningful.
struct ResultRecord {
  std::string manifest_digest;
  std::string task;
  json inputs = json::object();
  json values = json::object();
  std::vector<CheckVerdict> checks;
  double wall_seconds = 0.0;
  std::string tool_version = kToolVersion;

  bool all_passed() const {
    for (const CheckVerdict& v : checks) {
      if (!v.passed) return false;
    }
    return true;
  }

  json to_json(bool include_wall_time = true) const {
    json j;
    j["manifest_digest"] = manifest_digest;
    j["task"] = task;
    j["inputs"] = inputs;
    j["values"] = values;
    std::vector<CheckVerdict> sorted = checks;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckVerdict& x, const CheckVerdict& y) { return x.name < y.name; });
    j["checks"] = json::array();
    for (const CheckVerdict& v : sorted) j["checks"].push_back(verdict_to_json(v));
    if (include_wall_time) j["wall_seconds"] = wall_seconds;
    j["tool_version"] = tool_version;
    return j;
  }

  std::string canonical_dump() const { return to_json(false).dump(); }
};

}  // namespace retrobell

#endif  // RETROBELL_MANIFEST_HPP
