#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/errors.hpp"
#include "proeval/util.hpp"

namespace proeval {

enum class DomainId {
  recommendation,
  persuasion,
  ambiguous_instruction,
  long_term_follow_up,
  system_operation,
  glasses_assistant,
};

inline constexpr std::array<DomainId, 6> kAllDomains = {
    DomainId::recommendation,        DomainId::persuasion,
    DomainId::ambiguous_instruction, DomainId::long_term_follow_up,
    DomainId::system_operation,      DomainId::glasses_assistant,
};

inline std::string_view to_string(DomainId d) {
  switch (d) {
    case DomainId::recommendation: return "recommendation";
    case DomainId::persuasion: return "persuasion";
    case DomainId::ambiguous_instruction: return "ambiguous_instruction";
    case DomainId::long_term_follow_up: return "long_term_follow_up";
    case DomainId::system_operation: return "system_operation";
    case DomainId::glasses_assistant: return "glasses_assistant";
  }
  return "recommendation";
}

/// Short column labels used in report tables.
inline std::string_view domain_abbrev(DomainId d) {
  switch (d) {
    case DomainId::recommendation: return "Rec.";
    case DomainId::persuasion: return "Per.";
    case DomainId::ambiguous_instruction: return "AI.";
    case DomainId::long_term_follow_up: return "LF.";
    case DomainId::system_operation: return "Sys.";
    case DomainId::glasses_assistant: return "GAs.";
  }
  return "?";
}

inline DomainId domain_from_string(std::string_view name) {
  for (DomainId d : kAllDomains)
    if (to_string(d) == name) return d;
  throw ConfigError("unknown domain '" + std::string(name) + "'");
}

/// Human-facing display name used in prose prompts.
inline std::string domain_display_name(DomainId d) {
  std::string name{to_string(d)};
  for (auto& c : name)
    if (c == '_') c = ' ';
  return name;
}

enum class Tier { easy, fair, hard, discarded };

inline std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::easy: return "easy";
    case Tier::fair: return "fair";
    case Tier::hard: return "hard";
    case Tier::discarded: return "discarded";
  }
  return "easy";
}

inline Tier tier_from_string(std::string_view name) {
  for (Tier t : {Tier::easy, Tier::fair, Tier::hard, Tier::discarded})
    if (to_string(t) == name) return t;
  throw ConfigError("unknown tier '" + std::string(name) + "'");
}

/// The synthesized scenario the user-side of a dialogue is grounded in.
struct EnvironmentProfile {
  std::string user_information;
  std::string trigger_factor;
};

/// A proactive goal: one overall target plus the concrete sub-targets an
/// ideal assistant would work toward.
struct TargetPlan {
  std::string target;
  std::vector<std::string> sub_targets;
};

inline constexpr int kMaxPlanWords = 10;   // target/sub-target must stay under this
inline constexpr int kMinSubTargets = 2;
inline constexpr int kMaxSubTargets = 4;

/// Enforces the structural contract on a plan; throws InvariantViolation.
inline void validate_plan(const TargetPlan& plan) {
  if (util::trim(plan.target).empty()) throw InvariantViolation("plan target is empty");
  if (util::word_count(plan.target) >= kMaxPlanWords)
    throw InvariantViolation("plan target has " + std::to_string(util::word_count(plan.target)) +
                             " words; must be under " + std::to_string(kMaxPlanWords));
  if (plan.sub_targets.size() < kMinSubTargets || plan.sub_targets.size() > kMaxSubTargets)
    throw InvariantViolation("plan has " + std::to_string(plan.sub_targets.size()) +
                             " sub-targets; need " + std::to_string(kMinSubTargets) + ".." +
                             std::to_string(kMaxSubTargets));
  for (const auto& s : plan.sub_targets) {
    if (util::trim(s).empty()) throw InvariantViolation("plan sub-target is empty");
    if (util::word_count(s) >= kMaxPlanWords)
      throw InvariantViolation("sub-target '" + s + "' has " +
                               std::to_string(util::word_count(s)) + " words; must be under " +
                               std::to_string(kMaxPlanWords));
  }
}

inline bool plan_is_valid(const TargetPlan& plan) {
  try {
    validate_plan(plan);
    return true;
  } catch (const InvariantViolation&) {
    return false;
  }
}

/// One rewrite applied during difficulty refinement. Action is one of
/// obfuscate_user, obfuscate_trigger, noise_user, noise_trigger.
struct RefinementRecord {
  int round = 0;
  std::string action;
  std::string before;
  std::string after;
};

/// One evaluation case: a synthesized environment plus its reference plan,
/// carrying whatever refinement state it has accumulated.
struct EvalCase {
  std::string case_id;
  DomainId domain = DomainId::recommendation;
  std::vector<std::string> topic_path;
  EnvironmentProfile environment;
  TargetPlan reference_plan;
  std::optional<Tier> tier;  // absent until the case has been probed
  int refinement_rounds = 0;
  std::vector<RefinementRecord> history;
  std::vector<bool> validator_votes;  // final-check votes, empty until checked
  bool validated = false;
  uint64_t seed = 0;
};

inline void to_json(nlohmann::json& j, const EnvironmentProfile& e) {
  j = {{"user_information", e.user_information}, {"trigger_factor", e.trigger_factor}};
}
inline void from_json(const nlohmann::json& j, EnvironmentProfile& e) {
  j.at("user_information").get_to(e.user_information);
  j.at("trigger_factor").get_to(e.trigger_factor);
}

inline void to_json(nlohmann::json& j, const TargetPlan& p) {
  j = {{"target", p.target}, {"sub_targets", p.sub_targets}};
}
inline void from_json(const nlohmann::json& j, TargetPlan& p) {
  j.at("target").get_to(p.target);
  j.at("sub_targets").get_to(p.sub_targets);
}

inline void to_json(nlohmann::json& j, const RefinementRecord& r) {
  j = {{"round", r.round}, {"action", r.action}, {"before", r.before}, {"after", r.after}};
}
inline void from_json(const nlohmann::json& j, RefinementRecord& r) {
  j.at("round").get_to(r.round);
  j.at("action").get_to(r.action);
  j.at("before").get_to(r.before);
  j.at("after").get_to(r.after);
}

inline void to_json(nlohmann::json& j, const EvalCase& c) {
  j = {{"case_id", c.case_id},
       {"domain", std::string(to_string(c.domain))},
       {"topic_path", c.topic_path},
       {"environment", c.environment},
       {"reference_plan", c.reference_plan},
       {"refinement_rounds", c.refinement_rounds},
       {"history", c.history},
       {"validator_votes", c.validator_votes},
       {"validated", c.validated},
       {"seed", c.seed}};
  if (c.tier)
    j["tier"] = std::string(to_string(*c.tier));
  else
    j["tier"] = nullptr;
}
inline void from_json(const nlohmann::json& j, EvalCase& c) {
  j.at("case_id").get_to(c.case_id);
  c.domain = domain_from_string(j.at("domain").get<std::string>());
  j.at("topic_path").get_to(c.topic_path);
  j.at("environment").get_to(c.environment);
  j.at("reference_plan").get_to(c.reference_plan);
  j.at("refinement_rounds").get_to(c.refinement_rounds);
  j.at("history").get_to(c.history);
  j.at("validator_votes").get_to(c.validator_votes);
  j.at("validated").get_to(c.validated);
  j.at("seed").get_to(c.seed);
  if (j.contains("tier") && !j.at("tier").is_null())
    c.tier = tier_from_string(j.at("tier").get<std::string>());
  else
    c.tier.reset();
}

}  // namespace proeval
