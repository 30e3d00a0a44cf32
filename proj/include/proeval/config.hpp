#pragma once

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/errors.hpp"
#include "proeval/eval_guidance.hpp"
#include "proeval/gateway.hpp"
#include "proeval/util.hpp"

namespace proeval {

struct RoleBindings {
  std::string synthesizer;
  std::vector<std::string> probes;      // exactly 3, distinct
  std::vector<std::string> validators;  // exactly 5
  std::vector<std::string> evaluated;   // at least 1
  std::string user_sim;
  std::string checker;
  std::string judge;
  std::string annotator;  // optional: density annotation only
};

struct GenerationConfig {
  int n_candidates = 5;
  double high_temperature = 1.0;
  int max_refine_rounds = 5;
};

struct TreeConfig {
  int max_depth = 3;
  int branching = 8;
};

/// Relative paths resolve against the config file's directory.
struct PathsConfig {
  std::string trees_dir = "trees";
  std::string dataset = "dataset.jsonl";
  std::string refined = "refined.jsonl";
  std::string results_dir = "results";
  std::string cache_dir = "cache";
  std::string prompts_dir;   // empty: use embedded prompt assets
  std::string fixtures_dir;  // empty: use embedded domain fixtures
};

struct RunConfig {
  std::map<std::string, ModelEndpoint> endpoints;
  std::map<std::string, ScriptedBehavior> scripts;  // by endpoint id
  RoleBindings roles;
  GuidanceConfig guidance;
  GenerationConfig generation;
  TreeConfig tree;
  PathsConfig paths;
  uint64_t rng_seed = 0;
  int workers = 1;
};

/// Replaces ${NAME} with the value of environment variable NAME.
inline std::string interpolate_env(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size();) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      size_t end = text.find('}', i + 2);
      if (end == std::string::npos) throw ConfigError("unterminated ${...} in config");
      std::string name = text.substr(i + 2, end - i - 2);
      if (name.empty()) throw ConfigError("empty ${} in config");
      for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
          throw ConfigError("invalid environment variable name '" + name + "' in config");
      const char* value = std::getenv(name.c_str());
      if (value == nullptr)
        throw ConfigError("config references unset environment variable '" + name + "'");
      out += value;
      i = end + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

inline void to_json(nlohmann::json& j, const RoleBindings& r) {
  j = {{"synthesizer", r.synthesizer}, {"probes", r.probes},   {"validators", r.validators},
       {"evaluated", r.evaluated},     {"user_sim", r.user_sim}, {"checker", r.checker},
       {"judge", r.judge},             {"annotator", r.annotator}};
}
inline void from_json(const nlohmann::json& j, RoleBindings& r) {
  r.synthesizer = j.value("synthesizer", "");
  r.probes = j.value("probes", std::vector<std::string>{});
  r.validators = j.value("validators", std::vector<std::string>{});
  r.evaluated = j.value("evaluated", std::vector<std::string>{});
  r.user_sim = j.value("user_sim", "");
  r.checker = j.value("checker", "");
  r.judge = j.value("judge", "");
  r.annotator = j.value("annotator", "");
}

inline void to_json(nlohmann::json& j, const GenerationConfig& g) {
  j = {{"n_candidates", g.n_candidates},
       {"high_temperature", g.high_temperature},
       {"max_refine_rounds", g.max_refine_rounds}};
}
inline void from_json(const nlohmann::json& j, GenerationConfig& g) {
  g.n_candidates = j.value("n_candidates", 5);
  g.high_temperature = j.value("high_temperature", 1.0);
  g.max_refine_rounds = j.value("max_refine_rounds", 5);
}

inline void to_json(nlohmann::json& j, const TreeConfig& t) {
  j = {{"max_depth", t.max_depth}, {"branching", t.branching}};
}
inline void from_json(const nlohmann::json& j, TreeConfig& t) {
  t.max_depth = j.value("max_depth", 3);
  t.branching = j.value("branching", 8);
}

inline void to_json(nlohmann::json& j, const PathsConfig& p) {
  j = {{"trees_dir", p.trees_dir},     {"dataset", p.dataset},
       {"refined", p.refined},         {"results_dir", p.results_dir},
       {"cache_dir", p.cache_dir},     {"prompts_dir", p.prompts_dir},
       {"fixtures_dir", p.fixtures_dir}};
}
inline void from_json(const nlohmann::json& j, PathsConfig& p) {
  p.trees_dir = j.value("trees_dir", "trees");
  p.dataset = j.value("dataset", "dataset.jsonl");
  p.refined = j.value("refined", "refined.jsonl");
  p.results_dir = j.value("results_dir", "results");
  p.cache_dir = j.value("cache_dir", "cache");
  p.prompts_dir = j.value("prompts_dir", "");
  p.fixtures_dir = j.value("fixtures_dir", "");
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"endpoints", nlohmann::json::array()},
       {"scripts", c.scripts},
       {"roles", c.roles},
       {"guidance", c.guidance},
       {"generation", c.generation},
       {"tree", c.tree},
       {"paths", c.paths},
       {"rng_seed", c.rng_seed},
       {"workers", c.workers}};
  for (const auto& [id, endpoint] : c.endpoints) j["endpoints"].push_back(endpoint);
}
inline void from_json(const nlohmann::json& j, RunConfig& c) {
  c.endpoints.clear();
  for (const auto& e : j.value("endpoints", nlohmann::json::array())) {
    ModelEndpoint endpoint = e.get<ModelEndpoint>();
    if (!c.endpoints.emplace(endpoint.id, endpoint).second)
      throw ConfigError("duplicate endpoint id '" + endpoint.id + "'");
  }
  c.scripts.clear();
  if (j.contains("scripts"))
    for (const auto& [id, behavior] : j.at("scripts").items())
      c.scripts[id] = behavior.get<ScriptedBehavior>();
  c.roles = j.value("roles", RoleBindings{});
  c.guidance = j.contains("guidance") ? j.at("guidance").get<GuidanceConfig>() : GuidanceConfig{};
  c.generation = j.value("generation", GenerationConfig{});
  c.tree = j.value("tree", TreeConfig{});
  c.paths = j.value("paths", PathsConfig{});
  c.rng_seed = j.value("rng_seed", uint64_t{0});
  c.workers = j.value("workers", 1);
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
}

inline const ModelEndpoint& endpoint_for(const RunConfig& config, const std::string& id,
                                         const std::string& role) {
  if (id.empty()) throw ConfigError("config does not bind the '" + role + "' role");
  auto it = config.endpoints.find(id);
  if (it == config.endpoints.end())
    throw ConfigError("role '" + role + "' references unknown endpoint '" + id + "'");
  return it->second;
}

/// Checks role arities; roles for stages that will not run may stay empty.
inline void validate_roles(const RunConfig& config) {
  auto known = [&](const std::string& id) {
    return id.empty() || config.endpoints.count(id) > 0;
  };
  if (!known(config.roles.synthesizer) || !known(config.roles.user_sim) ||
      !known(config.roles.checker) || !known(config.roles.judge) ||
      !known(config.roles.annotator))
    throw ConfigError("a role references an endpoint missing from 'endpoints'");
  for (const auto& id : config.roles.evaluated)
    if (!config.endpoints.count(id))
      throw ConfigError("evaluated endpoint '" + id + "' missing from 'endpoints'");
  if (!config.roles.probes.empty()) {
    if (config.roles.probes.size() != 3)
      throw ConfigError("'probes' must bind exactly 3 endpoints");
    std::set<std::string> distinct(config.roles.probes.begin(), config.roles.probes.end());
    if (distinct.size() != 3) throw ConfigError("'probes' endpoints must be distinct");
    for (const auto& id : config.roles.probes)
      if (!config.endpoints.count(id))
        throw ConfigError("probe endpoint '" + id + "' missing from 'endpoints'");
  }
  if (!config.roles.validators.empty()) {
    if (config.roles.validators.size() != 5)
      throw ConfigError("'validators' must bind exactly 5 endpoints");
    for (const auto& id : config.roles.validators)
      if (!config.endpoints.count(id))
        throw ConfigError("validator endpoint '" + id + "' missing from 'endpoints'");
  }
}

/// Loads and validates a config file, applying ${ENV} interpolation.
/// An optional "script_file" key merges additional scripted behaviors.
inline RunConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(interpolate_env(util::read_file(path)));
  RunConfig config = j.get<RunConfig>();
  if (j.contains("script_file")) {
    std::filesystem::path script_path = j.at("script_file").get<std::string>();
    if (script_path.is_relative()) script_path = path.parent_path() / script_path;
    nlohmann::json scripts = nlohmann::json::parse(util::read_file(script_path));
    for (const auto& [id, behavior] : scripts.items())
      config.scripts[id] = behavior.get<ScriptedBehavior>();
  }
  validate_roles(config);
  for (const auto& [id, behavior] : config.scripts) {
    (void)behavior;
    if (!config.endpoints.count(id))
      throw ConfigError("script bound to unknown endpoint '" + id + "'");
  }
  return config;
}

/// Stable hash of everything that affects outputs. Paths are excluded so
/// the same logical run hashes identically from any working directory.
inline std::string config_hash(const RunConfig& config) {
  nlohmann::json j = config;
  j.erase("paths");
  return util::hex64(util::fnv1a(j.dump()));
}

/// Deterministic run identity: command + logical config + seed.
inline std::string make_run_id(const std::string& command, const RunConfig& config,
                               uint64_t seed) {
  return util::hex64(util::fnv1a(command + "|" + config_hash(config) + "|" +
                                 std::to_string(seed)));
}

}  // namespace proeval
