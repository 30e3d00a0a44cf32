#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/domains.hpp"
#include "proeval/errors.hpp"
#include "proeval/gateway.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/prompts.hpp"
#include "proeval/util.hpp"

namespace proeval {

inline constexpr int kDefaultCandidateCount = 5;
inline constexpr double kDefaultSamplingTemperature = 1.0;
inline constexpr int kCandidateRegenBudget = 2;

struct EnsembleOutcome {
  std::string analysis;
  TargetPlan plan;
  std::vector<TargetPlan> candidates;
};

/// Accepts the key spellings the prompt formats use interchangeably
/// ("Target"/"target", "sub-target"/"sub_target"/plural forms).
inline TargetPlan parse_plan_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw MalformedJson("plan is not a JSON object");
  TargetPlan plan;
  const char* target_keys[] = {"Target", "target"};
  const char* sub_keys[] = {"sub-target", "sub_target", "sub-targets", "sub_targets"};
  for (const char* key : target_keys)
    if (obj.contains(key) && obj[key].is_string()) {
      plan.target = util::trim(obj[key].get<std::string>());
      break;
    }
  if (plan.target.empty()) throw MalformedJson("plan object lacks a target string");
  for (const char* key : sub_keys) {
    if (!obj.contains(key)) continue;
    const auto& value = obj[key];
    if (value.is_array()) {
      for (const auto& s : value)
        if (s.is_string()) plan.sub_targets.push_back(util::trim(s.get<std::string>()));
      return plan;
    }
    if (value.is_string()) {
      plan.sub_targets.push_back(util::trim(value.get<std::string>()));
      return plan;
    }
  }
  throw MalformedJson("plan object lacks a sub-target list");
}

inline TargetPlan parse_plan_text(const std::string& text) {
  return parse_plan_json(extract_json(text));
}

/// Serializes a plan the way the prompt formats spell it.
inline std::string plan_json(const TargetPlan& plan) {
  nlohmann::json j = {{"Target", plan.target}, {"sub_target", plan.sub_targets}};
  return j.dump();
}

namespace detail {

inline std::string environment_json(const EnvironmentProfile& env) {
  return nlohmann::json(env).dump();
}

inline std::string environment_examples_block(const DomainSpec& domain) {
  std::string block;
  for (const auto& e : domain.example_environments) block += nlohmann::json(e).dump() + "\n";
  return block;
}

inline std::string plan_examples_block(const DomainSpec& domain) {
  std::string block;
  for (size_t i = 0; i < domain.example_environments.size() && i < domain.example_plans.size();
       ++i) {
    block += "Environment: " + nlohmann::json(domain.example_environments[i]).dump() + "\n";
    block += "Plan: " + plan_json(domain.example_plans[i]) + "\n";
  }
  for (size_t i = domain.example_environments.size(); i < domain.example_plans.size(); ++i)
    block += "Plan: " + plan_json(domain.example_plans[i]) + "\n";
  return block;
}

}  // namespace detail

/// Domain description plus the sampled topic path, the {description} text
/// shared by the scenario and plan prompts.
inline std::string compose_description(const DomainSpec& domain,
                                       const std::vector<std::string>& topic_path) {
  std::string description = domain.description_prompt;
  if (topic_path.size() > 1) {
    description += "\nThe specific topic for this environment: ";
    for (size_t i = 1; i < topic_path.size(); ++i) {
      if (i > 1) description += " / ";
      description += topic_path[i];
    }
    description += ".";
  }
  return description;
}

/// Synthesizes one scenario (user information + trigger factor) for a topic.
inline EnvironmentProfile generate_environment(Gateway& gateway, const ModelEndpoint& generator,
                                               const PromptLibrary& prompts,
                                               const DomainSpec& domain,
                                               const std::vector<std::string>& topic_path,
                                               const std::string& cache_salt = "") {
  std::string prompt =
      prompts.fill("environment_gen", {{"description", compose_description(domain, topic_path)},
                                       {"Examples", detail::environment_examples_block(domain)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> EnvironmentProfile {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("user_information") || !obj.contains("trigger_factor") ||
        !obj["user_information"].is_string() || !obj["trigger_factor"].is_string())
      throw MalformedJson("scenario reply lacks user_information/trigger_factor strings");
    EnvironmentProfile env;
    env.user_information = util::trim(obj["user_information"].get<std::string>());
    env.trigger_factor = util::trim(obj["trigger_factor"].get<std::string>());
    return env;
  };

  CompleteOptions options;
  options.cache_salt = cache_salt;
  EnvironmentProfile env;
  try {
    env = parse(gateway.complete(generator, messages, options).content);
  } catch (const NoJsonFound&) {
    options.cache_salt = cache_salt + "|reask1";
    env = parse(gateway.complete(generator, messages, options).content);
  } catch (const MalformedJson&) {
    options.cache_salt = cache_salt + "|reask1";
    env = parse(gateway.complete(generator, messages, options).content);
  }
  if (env.user_information.empty()) throw EmptyField("generated user_information is empty");
  if (env.trigger_factor.empty()) throw EmptyField("generated trigger_factor is empty");
  return env;
}

/// Draws n independent high-temperature plans for one environment. A slot
/// whose reply fails to parse or breaks the plan contract is regenerated up
/// to kCandidateRegenBudget times, then dropped; a short final list throws.
inline std::vector<TargetPlan> generate_candidate_plans(
    Gateway& gateway, const ModelEndpoint& generator, const PromptLibrary& prompts,
    const DomainSpec& domain, const std::vector<std::string>& topic_path,
    const EnvironmentProfile& env, int n = kDefaultCandidateCount,
    double temperature = kDefaultSamplingTemperature, const std::string& cache_salt = "") {
  if (n < 1) throw Error("candidate count must be >= 1");
  std::string prompt =
      prompts.fill("target_gen", {{"description", compose_description(domain, topic_path)},
                                  {"example", detail::plan_examples_block(domain)},
                                  {"environment", detail::environment_json(env)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  std::vector<TargetPlan> plans;
  for (int slot = 0; slot < n; ++slot) {
    std::optional<TargetPlan> accepted;
    for (int attempt = 0; attempt <= kCandidateRegenBudget && !accepted; ++attempt) {
      CompleteOptions options;
      options.temperature = temperature;
      options.cache_salt = cache_salt + "|cand" + std::to_string(slot) +
                           (attempt ? "|retry" + std::to_string(attempt) : "");
      CompletionResult res = gateway.complete(generator, messages, options);
      try {
        TargetPlan plan = parse_plan_text(res.content);
        validate_plan(plan);
        accepted = std::move(plan);
      } catch (const Error&) {
        // malformed or contract-breaking plan: burn a regeneration attempt
      }
    }
    if (accepted) plans.push_back(std::move(*accepted));
  }
  if (static_cast<int>(plans.size()) < n)
    throw CandidateShortfall("only " + std::to_string(plans.size()) + " of " + std::to_string(n) +
                             " candidate plans were valid after retries");
  return plans;
}

/// Synthesizes the candidate plans into one reference plan. The synthesized
/// plan must itself satisfy the plan contract; one re-ask is allowed.
inline EnsembleOutcome ensemble_plans(Gateway& gateway, const ModelEndpoint& ensembler,
                                      const PromptLibrary& prompts, const DomainSpec& domain,
                                      const std::vector<std::string>& topic_path,
                                      const EnvironmentProfile& env,
                                      const std::vector<TargetPlan>& candidates,
                                      const std::string& cache_salt = "") {
  if (candidates.size() < 2) throw Error("ensembling needs at least 2 candidate plans");
  std::string targets_block;
  for (size_t i = 0; i < candidates.size(); ++i)
    targets_block +=
        "Target " + std::to_string(i + 1) + ": " + plan_json(candidates[i]) + "\n";

  std::string prompt =
      prompts.fill("target_ensemble", {{"description", compose_description(domain, topic_path)},
                                       {"environment", detail::environment_json(env)},
                                       {"targets", targets_block}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> std::pair<std::string, TargetPlan> {
    nlohmann::json obj = extract_json(content);
    std::string analysis;
    if (obj.contains("analyze_process") && obj["analyze_process"].is_string())
      analysis = obj["analyze_process"].get<std::string>();
    TargetPlan plan = parse_plan_json(obj);
    return {std::move(analysis), std::move(plan)};
  };

  EnsembleOutcome outcome;
  outcome.candidates = candidates;
  CompleteOptions options;
  options.cache_salt = cache_salt;
  bool retried = false;
  for (;;) {
    std::string content = gateway.complete(ensembler, messages, options).content;
    std::pair<std::string, TargetPlan> parsed;
    try {
      parsed = parse(content);
    } catch (const Error&) {
      if (retried) throw;
      retried = true;
      options.cache_salt = cache_salt + "|reask1";
      continue;
    }
    try {
      validate_plan(parsed.second);
    } catch (const InvariantViolation&) {
      if (retried) throw;
      retried = true;
      options.cache_salt = cache_salt + "|reask1";
      continue;
    }
    outcome.analysis = std::move(parsed.first);
    outcome.plan = std::move(parsed.second);
    return outcome;
  }
}

}  // namespace proeval
