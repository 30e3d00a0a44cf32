#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/asset_data.hpp"
#include "proeval/cases.hpp"
#include "proeval/errors.hpp"
#include "proeval/util.hpp"

namespace proeval {

/// In-context example for a rewrite prompt. `target` is only present for
/// trigger-factor rewrites, which must keep the target reachable.
struct RewriteExample {
  std::string input;
  std::string target;
  std::string output;
};

/// Calibration shot for the plan-similarity judge: a generated plan, the
/// grading rationale, and the awarded score.
struct JudgeShot {
  TargetPlan generated;
  std::string reason;
  int score = 1;
};

/// Everything domain-specific the pipeline needs: prose used in prompts,
/// seed topics for tree expansion, and few-shot material.
struct DomainSpec {
  DomainId id = DomainId::recommendation;
  std::string description_prompt;
  std::string obfuscation_rule;
  std::vector<std::string> seed_topics;
  std::vector<EnvironmentProfile> example_environments;
  std::vector<TargetPlan> example_plans;
  std::map<std::string, std::vector<RewriteExample>> rewrite_examples;  // by field
  std::map<std::string, std::vector<RewriteExample>> noise_examples;    // by field
  std::vector<JudgeShot> judge_shots;
};

namespace detail {

inline RewriteExample parse_rewrite_example(const nlohmann::json& j) {
  RewriteExample e;
  j.at("input").get_to(e.input);
  j.at("output").get_to(e.output);
  if (j.contains("target")) j.at("target").get_to(e.target);
  return e;
}

inline DomainSpec parse_domain_spec(const nlohmann::json& j) {
  DomainSpec spec;
  spec.id = domain_from_string(j.at("id").get<std::string>());
  j.at("description_prompt").get_to(spec.description_prompt);
  j.at("obfuscation_rule").get_to(spec.obfuscation_rule);
  j.at("seed_topics").get_to(spec.seed_topics);
  for (const auto& e : j.at("example_environments"))
    spec.example_environments.push_back(e.get<EnvironmentProfile>());
  for (const auto& p : j.at("example_plans")) spec.example_plans.push_back(p.get<TargetPlan>());
  for (const auto& [field, examples] : j.at("rewrite_examples").items())
    for (const auto& e : examples) spec.rewrite_examples[field].push_back(parse_rewrite_example(e));
  for (const auto& [field, examples] : j.at("noise_examples").items())
    for (const auto& e : examples) spec.noise_examples[field].push_back(parse_rewrite_example(e));
  for (const auto& s : j.at("judge_shots")) {
    JudgeShot shot;
    shot.generated = s.at("generated").get<TargetPlan>();
    s.at("reason").get_to(shot.reason);
    s.at("score").get_to(shot.score);
    spec.judge_shots.push_back(std::move(shot));
  }
  return spec;
}

}  // namespace detail

/// Holds the six built-in domain specs. Default-constructed from data
/// embedded at build time; a directory of *.json files can override it.
class DomainRegistry {
 public:
  DomainRegistry() {
    for (const auto& [name, text] : asset_data::fixtures) {
      (void)name;
      add(nlohmann::json::parse(text));
    }
  }

  explicit DomainRegistry(const std::filesystem::path& dir) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      add(nlohmann::json::parse(util::read_file(entry.path())));
    }
    if (specs_.empty()) throw ConfigError("no domain specs found in " + dir.string());
  }

  const DomainSpec& get(DomainId id) const {
    auto it = specs_.find(id);
    if (it == specs_.end())
      throw ConfigError("domain '" + std::string(to_string(id)) + "' not loaded");
    return it->second;
  }

  std::vector<DomainId> ids() const {
    std::vector<DomainId> out;
    for (const auto& [id, spec] : specs_) out.push_back(id);
    return out;
  }

 private:
  void add(const nlohmann::json& j) {
    DomainSpec spec = detail::parse_domain_spec(j);
    specs_[spec.id] = std::move(spec);
  }

  std::map<DomainId, DomainSpec> specs_;
};

}  // namespace proeval
