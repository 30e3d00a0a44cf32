#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/domains.hpp"
#include "proeval/envgen.hpp"
#include "proeval/errors.hpp"
#include "proeval/gateway.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/prompts.hpp"
#include "proeval/util.hpp"

namespace proeval {

struct JudgeVerdict {
  std::string reason;
  int score = 1;  // always in [1,10]
};

struct PlanningResult {
  std::string case_id;
  std::string endpoint_id;
  std::string run_id;
  TargetPlan generated;
  JudgeVerdict verdict;
  std::string raw_model_output;
  bool parse_failed = false;   // no usable plan in the model output
  bool plan_invalid = false;   // parsed but breaks the plan contract
};

inline void to_json(nlohmann::json& j, const JudgeVerdict& v) {
  j = {{"reason", v.reason}, {"score", v.score}};
}
inline void from_json(const nlohmann::json& j, JudgeVerdict& v) {
  j.at("reason").get_to(v.reason);
  j.at("score").get_to(v.score);
}

inline void to_json(nlohmann::json& j, const PlanningResult& r) {
  j = {{"case_id", r.case_id},
       {"endpoint_id", r.endpoint_id},
       {"run_id", r.run_id},
       {"generated", r.generated},
       {"verdict", r.verdict},
       {"raw_model_output", r.raw_model_output},
       {"parse_failed", r.parse_failed},
       {"plan_invalid", r.plan_invalid}};
}
inline void from_json(const nlohmann::json& j, PlanningResult& r) {
  j.at("case_id").get_to(r.case_id);
  j.at("endpoint_id").get_to(r.endpoint_id);
  j.at("run_id").get_to(r.run_id);
  j.at("generated").get_to(r.generated);
  j.at("verdict").get_to(r.verdict);
  j.at("raw_model_output").get_to(r.raw_model_output);
  j.at("parse_failed").get_to(r.parse_failed);
  j.at("plan_invalid").get_to(r.plan_invalid);
}

struct PlanAttempt {
  std::optional<TargetPlan> plan;
  std::string raw_output;
  bool invalid = false;
};

/// One shot at the planning task: the evaluated model sees the environment
/// through the generation template, never the reference. Format failures
/// are recorded, not retried — they are part of the model's performance.
inline PlanAttempt plan_targets(Gateway& gateway, const ModelEndpoint& evaluated,
                                const PromptLibrary& prompts, const DomainSpec& domain,
                                const EvalCase& c, const std::string& cache_salt = "") {
  std::string prompt = prompts.fill(
      "target_gen", {{"description", compose_description(domain, c.topic_path)},
                     {"example", detail::plan_examples_block(domain)},
                     {"environment", detail::environment_json(c.environment)}});
  CompleteOptions options;
  options.cache_salt = cache_salt;
  PlanAttempt attempt;
  attempt.raw_output =
      gateway.complete(evaluated, {user_message(prompt)}, options).content;
  try {
    attempt.plan = parse_plan_text(attempt.raw_output);
  } catch (const NoJsonFound&) {
    return attempt;
  } catch (const MalformedJson&) {
    return attempt;
  }
  try {
    validate_plan(*attempt.plan);
  } catch (const InvariantViolation&) {
    attempt.invalid = true;  // judged verbatim; the judge penalizes it
  }
  return attempt;
}

namespace detail {

/// Only whole numbers in [1,10] are scores; fractional values and strings
/// that do not spell a whole number are out of range, not merely malformed.
inline int parse_judge_score(const nlohmann::json& value) {
  if (value.is_number_integer()) return value.get<int>();
  if (value.is_number_float()) {
    double d = value.get<double>();
    int i = static_cast<int>(d);
    if (static_cast<double>(i) == d) return i;
    throw ScoreOutOfRange("judge score is not a whole number");
  }
  if (value.is_string()) {
    const std::string s = util::trim(value.get<std::string>());
    size_t pos = 0;
    int i = 0;
    try {
      i = std::stoi(s, &pos);
    } catch (const std::exception&) {
      throw ScoreOutOfRange("judge score '" + s + "' is not a whole number");
    }
    if (pos != s.size()) throw ScoreOutOfRange("judge score '" + s + "' is not a whole number");
    return i;
  }
  throw MalformedJson("judge score has a non-numeric type");
}

inline std::string judge_shots_block(const DomainSpec& domain) {
  std::string block;
  for (const auto& shot : domain.judge_shots) {
    block += "generated target: " + plan_json(shot.generated) + "\n";
    block += "{\"reason\":" + nlohmann::json(shot.reason).dump() +
             ", \"score\":" + std::to_string(shot.score) + "}\n\n";
  }
  return block;
}

}  // namespace detail

/// Scores a generated plan against the case's reference, 1-10. The prompt
/// identifies neither the evaluated model nor the run, only the plans.
inline JudgeVerdict judge_planning(Gateway& gateway, const ModelEndpoint& judge,
                                   const PromptLibrary& prompts, const DomainSpec& domain,
                                   const EvalCase& c, const TargetPlan& generated,
                                   const std::string& cache_salt = "") {
  std::string prompt = prompts.fill(
      "judge_planning",
      {{"DOMAIN_DESCRIPTIONS[domain_name]", domain.description_prompt},
       {"environment", detail::environment_json(c.environment)},
       {"reference", plan_json(c.reference_plan)},
       {"generation", plan_json(generated)},
       {"examples", detail::judge_shots_block(domain)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> JudgeVerdict {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("score")) throw MalformedJson("judge reply lacks 'score'");
    JudgeVerdict v;
    v.score = detail::parse_judge_score(obj["score"]);
    if (v.score < 1 || v.score > 10)
      throw ScoreOutOfRange("judge score " + std::to_string(v.score) + " outside [1,10]");
    if (obj.contains("reason") && obj["reason"].is_string())
      v.reason = util::trim(obj["reason"].get<std::string>());
    if (v.reason.empty()) throw MalformedJson("judge reply lacks a reasoning string");
    return v;
  };

  CompleteOptions options;
  options.cache_salt = cache_salt;
  std::string content = gateway.complete(judge, messages, options).content;
  try {
    return parse(content);
  } catch (const Error&) {
    options.cache_salt = cache_salt + "|reask1";
    content = gateway.complete(judge, messages, options).content;
    return parse(content);  // MalformedJson / ScoreOutOfRange propagate
  }
}

inline constexpr int kFloorScore = 1;

/// Planning task end-to-end for one (case, evaluated endpoint): generate,
/// then judge. Unparseable model output takes the floor score without a
/// judge call.
inline PlanningResult evaluate_planning_case(Gateway& gateway, const ModelEndpoint& evaluated,
                                             const ModelEndpoint& judge,
                                             const PromptLibrary& prompts,
                                             const DomainSpec& domain, const EvalCase& c,
                                             const std::string& run_id = "") {
  PlanningResult result;
  result.case_id = c.case_id;
  result.endpoint_id = evaluated.id;
  result.run_id = run_id;

  PlanAttempt attempt =
      plan_targets(gateway, evaluated, prompts, domain, c, c.case_id + "|plan|" + evaluated.id);
  result.raw_model_output = attempt.raw_output;
  result.plan_invalid = attempt.invalid;
  if (!attempt.plan) {
    result.parse_failed = true;
    result.verdict = {"model output contained no parseable plan; floor score assigned",
                      kFloorScore};
    return result;
  }
  result.generated = *attempt.plan;
  result.verdict = judge_planning(gateway, judge, prompts, domain, c, result.generated,
                                  c.case_id + "|judge|" + evaluated.id);
  return result;
}

}  // namespace proeval
