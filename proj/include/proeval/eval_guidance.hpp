#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/domains.hpp"
#include "proeval/envgen.hpp"
#include "proeval/errors.hpp"
#include "proeval/eval_planning.hpp"
#include "proeval/gateway.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/prompts.hpp"
#include "proeval/util.hpp"

namespace proeval {

enum class Agreeableness { low, medium, high };

inline std::string_view to_string(Agreeableness a) {
  switch (a) {
    case Agreeableness::low: return "low";
    case Agreeableness::medium: return "medium";
    case Agreeableness::high: return "high";
  }
  return "medium";
}

inline Agreeableness agreeableness_from_string(std::string_view name) {
  for (Agreeableness a : {Agreeableness::low, Agreeableness::medium, Agreeableness::high})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown agreeableness '" + std::string(name) + "'");
}

/// Behavioral instructions handed to the simulated user per tier. Lower
/// agreeableness means stronger resistance to the assistant's guidance.
inline std::string_view agreeableness_directive(Agreeableness a) {
  switch (a) {
    case Agreeableness::low:
      return "You are hard to convince. Resist the assistant's suggestions, raise objections, "
             "and require strong justification before you accept anything.";
    case Agreeableness::medium:
      return "You are neutral. Consider the assistant's points on their merits and cooperate "
             "once you are convinced.";
    case Agreeableness::high:
      return "You are receptive and encouraging. Respond positively to the assistant's "
             "suggestions and go along with reasonable proposals.";
  }
  return "";
}

struct GuidanceConfig {
  int max_turns = 6;
  int memory_window = 3;
  Agreeableness agreeableness = Agreeableness::medium;
  bool target_visible = true;
};

inline void validate_config(const GuidanceConfig& config) {
  if (config.max_turns < 1) throw ConfigError("max_turns must be positive");
  if (config.memory_window < 1) throw ConfigError("memory_window must be positive");
  if (config.memory_window > config.max_turns)
    throw ConfigError("memory_window cannot exceed max_turns");
}

/// One turn: the assistant always speaks first; the user reply is absent
/// when the dialogue ends right after the assistant message.
struct DialogueTurn {
  int index = 1;
  std::string assistant_message;
  std::optional<std::string> user_message;
};

enum class Termination { target_reached, max_turns };

inline std::string_view to_string(Termination t) {
  return t == Termination::target_reached ? "target_reached" : "max_turns";
}

inline Termination termination_from_string(std::string_view name) {
  if (name == "target_reached") return Termination::target_reached;
  if (name == "max_turns") return Termination::max_turns;
  throw ConfigError("unknown termination '" + std::string(name) + "'");
}

struct DialogueTranscript {
  std::string case_id;
  std::string endpoint_id;
  GuidanceConfig config;
  std::vector<DialogueTurn> turns;
  Termination termination = Termination::max_turns;
};

struct GuidanceVerdict {
  std::string thought;
  int score = 1;
};

struct GuidanceResult {
  std::string case_id;
  std::string endpoint_id;
  std::string run_id;
  DialogueTranscript transcript;
  GuidanceVerdict verdict;
};

inline void to_json(nlohmann::json& j, const GuidanceConfig& c) {
  j = {{"max_turns", c.max_turns},
       {"memory_window", c.memory_window},
       {"agreeableness", std::string(to_string(c.agreeableness))},
       {"target_visible", c.target_visible}};
}
inline void from_json(const nlohmann::json& j, GuidanceConfig& c) {
  c.max_turns = j.value("max_turns", 6);
  c.memory_window = j.value("memory_window", 3);
  c.agreeableness = agreeableness_from_string(j.value("agreeableness", "medium"));
  c.target_visible = j.value("target_visible", true);
}

inline void to_json(nlohmann::json& j, const DialogueTurn& t) {
  j = {{"index", t.index}, {"assistant_message", t.assistant_message}};
  if (t.user_message)
    j["user_message"] = *t.user_message;
  else
    j["user_message"] = nullptr;
}
inline void from_json(const nlohmann::json& j, DialogueTurn& t) {
  j.at("index").get_to(t.index);
  j.at("assistant_message").get_to(t.assistant_message);
  if (j.contains("user_message") && !j.at("user_message").is_null())
    t.user_message = j.at("user_message").get<std::string>();
  else
    t.user_message.reset();
}

inline void to_json(nlohmann::json& j, const DialogueTranscript& t) {
  j = {{"case_id", t.case_id},
       {"endpoint_id", t.endpoint_id},
       {"config", t.config},
       {"turns", t.turns},
       {"termination", std::string(to_string(t.termination))}};
}
inline void from_json(const nlohmann::json& j, DialogueTranscript& t) {
  j.at("case_id").get_to(t.case_id);
  j.at("endpoint_id").get_to(t.endpoint_id);
  j.at("config").get_to(t.config);
  j.at("turns").get_to(t.turns);
  t.termination = termination_from_string(j.at("termination").get<std::string>());
}

inline void to_json(nlohmann::json& j, const GuidanceVerdict& v) {
  j = {{"thought", v.thought}, {"score", v.score}};
}
inline void from_json(const nlohmann::json& j, GuidanceVerdict& v) {
  j.at("thought").get_to(v.thought);
  j.at("score").get_to(v.score);
}

inline void to_json(nlohmann::json& j, const GuidanceResult& r) {
  j = {{"case_id", r.case_id},
       {"endpoint_id", r.endpoint_id},
       {"run_id", r.run_id},
       {"transcript", r.transcript},
       {"verdict", r.verdict}};
}
inline void from_json(const nlohmann::json& j, GuidanceResult& r) {
  j.at("case_id").get_to(r.case_id);
  j.at("endpoint_id").get_to(r.endpoint_id);
  j.at("run_id").get_to(r.run_id);
  j.at("transcript").get_to(r.transcript);
  j.at("verdict").get_to(r.verdict);
}

/// Plain-text rendering of the dialogue used inside prompts.
inline std::string serialize_conversation(const std::vector<DialogueTurn>& turns) {
  std::string out;
  for (const auto& t : turns) {
    out += "assistant: " + t.assistant_message + "\n";
    if (t.user_message) out += "user: " + *t.user_message + "\n";
  }
  if (out.empty()) out = "(no messages yet)\n";
  return out;
}

namespace detail {

inline std::string target_block(const EvalCase& c) {
  std::string block = "<Target>\nYour goal for this conversation:\ntarget: " +
                      c.reference_plan.target + "\nsub-targets:\n";
  for (const auto& s : c.reference_plan.sub_targets) block += "- " + s + "\n";
  block +=
      "Work toward the sub-targets step by step across the conversation without revealing "
      "them verbatim.\n</Target>\n";
  return block;
}

inline constexpr std::string_view kKickoff =
    "(You are starting this conversation. Send your first message now.)";

}  // namespace detail

/// Builds the evaluated model's request for the next assistant message:
/// system context (environment, and the target block only when visible),
/// a fixed kickoff line, then only the most recent `memory_window` turns.
inline std::vector<ChatMessage> build_assistant_payload(const PromptLibrary& prompts,
                                                        const EvalCase& c,
                                                        const GuidanceConfig& config,
                                                        const std::vector<DialogueTurn>& turns) {
  std::string system = prompts.fill(
      "guidance_assistant",
      {{"user_information", c.environment.user_information},
       {"trigger_factor", c.environment.trigger_factor},
       {"target_block", config.target_visible ? detail::target_block(c) : std::string()}});
  std::vector<ChatMessage> messages{system_message(std::move(system)),
                                    user_message(std::string(detail::kKickoff))};
  size_t start = turns.size() > static_cast<size_t>(config.memory_window)
                     ? turns.size() - config.memory_window
                     : 0;
  for (size_t i = start; i < turns.size(); ++i) {
    messages.push_back(assistant_message(turns[i].assistant_message));
    if (turns[i].user_message) messages.push_back(user_message(*turns[i].user_message));
  }
  return messages;
}

/// Asks the checker whether the target has been reached. Strict bare
/// yes/no parse; anything else gets one re-ask and then counts as "not
/// reached" so the dialogue keeps going.
inline bool check_completion(Gateway& gateway, const ModelEndpoint& checker,
                             const PromptLibrary& prompts, const EvalCase& c,
                             const std::vector<DialogueTurn>& turns,
                             const std::string& cache_salt = "") {
  std::string prompt = prompts.fill(
      "completion_checker",
      {{"target", c.reference_plan.target},
       {"sub_target", nlohmann::json(c.reference_plan.sub_targets).dump()},
       {"conversation", serialize_conversation(turns)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> std::optional<bool> {
    std::string t = util::to_lower(util::trim(content));
    while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
    if (t == "yes") return true;
    if (t == "no") return false;
    return std::nullopt;
  };

  CompleteOptions options;
  options.cache_salt = cache_salt;
  if (auto verdict = parse(gateway.complete(checker, messages, options).content)) return *verdict;
  options.cache_salt = cache_salt + "|reask1";
  if (auto verdict = parse(gateway.complete(checker, messages, options).content)) return *verdict;
  return false;
}

/// Simulated user's next message, conditioned on the full environment,
/// the full transcript, and the agreeableness directive.
inline std::string simulate_user_reply(Gateway& gateway, const ModelEndpoint& user_sim,
                                       const PromptLibrary& prompts, const EvalCase& c,
                                       const std::vector<DialogueTurn>& turns,
                                       Agreeableness agreeableness,
                                       const std::string& cache_salt = "") {
  std::string prompt = prompts.fill(
      "user_simulator",
      {{"user_information", c.environment.user_information},
       {"trigger_factor", c.environment.trigger_factor},
       {"agreeableness_directive", std::string(agreeableness_directive(agreeableness))},
       {"conversation", serialize_conversation(turns)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  CompleteOptions options;
  options.cache_salt = cache_salt;
  std::string reply = util::trim(gateway.complete(user_sim, messages, options).content);
  if (!reply.empty()) return reply;
  options.cache_salt = cache_salt + "|reask1";
  reply = util::trim(gateway.complete(user_sim, messages, options).content);
  if (!reply.empty()) return reply;
  throw EmptyReply("simulated user returned an empty message twice");
}

/// Runs one dialogue: the evaluated model initiates and guides, the
/// completion check runs after every assistant message, and the simulated
/// user replies only while the dialogue continues.
inline DialogueTranscript run_dialogue(Gateway& gateway, const ModelEndpoint& evaluated,
                                       const ModelEndpoint& user_sim,
                                       const ModelEndpoint& checker,
                                       const PromptLibrary& prompts, const EvalCase& c,
                                       const GuidanceConfig& config,
                                       const std::string& cache_salt = "") {
  validate_config(config);
  DialogueTranscript transcript;
  transcript.case_id = c.case_id;
  transcript.endpoint_id = evaluated.id;
  transcript.config = config;
  transcript.termination = Termination::max_turns;
  const std::string salt_base =
      (cache_salt.empty() ? c.case_id : cache_salt) + "|" + evaluated.id + "|" +
      std::string(to_string(config.agreeableness)) + (config.target_visible ? "" : "|notarget");

  for (int turn = 1; turn <= config.max_turns; ++turn) {
    auto payload = build_assistant_payload(prompts, c, config, transcript.turns);
    CompleteOptions options;
    options.cache_salt = salt_base + "|turn" + std::to_string(turn);
    std::string assistant = util::trim(gateway.complete(evaluated, payload, options).content);
    if (assistant.empty()) {
      options.cache_salt = salt_base + "|turn" + std::to_string(turn) + "|reask1";
      assistant = util::trim(gateway.complete(evaluated, payload, options).content);
      if (assistant.empty()) throw EmptyReply("evaluated model sent an empty message twice");
    }
    transcript.turns.push_back({turn, assistant, std::nullopt});

    if (check_completion(gateway, checker, prompts, c, transcript.turns,
                         salt_base + "|check" + std::to_string(turn))) {
      transcript.termination = Termination::target_reached;
      return transcript;  // final turn keeps no user reply
    }
    if (turn == config.max_turns) break;  // cap reached, no further user reply needed

    std::string reply =
        simulate_user_reply(gateway, user_sim, prompts, c, transcript.turns,
                            config.agreeableness, salt_base + "|user" + std::to_string(turn));
    transcript.turns.back().user_message = std::move(reply);
  }
  return transcript;
}

/// Scores the whole conversation 1-10 along the guidance criteria.
inline GuidanceVerdict judge_guidance(Gateway& gateway, const ModelEndpoint& judge,
                                      const PromptLibrary& prompts, const EvalCase& c,
                                      const DialogueTranscript& transcript,
                                      const std::string& cache_salt = "") {
  if (transcript.turns.empty()) throw Error("cannot judge an empty transcript");
  std::string prompt = prompts.fill(
      "judge_guidance",
      {{"user_information", c.environment.user_information},
       {"trigger_factor", c.environment.trigger_factor},
       {"target", c.reference_plan.target},
       {"sub_target", nlohmann::json(c.reference_plan.sub_targets).dump()},
       {"conversation", serialize_conversation(transcript.turns)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> GuidanceVerdict {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("score")) throw MalformedJson("guidance judge reply lacks 'score'");
    GuidanceVerdict v;
    v.score = detail::parse_judge_score(obj["score"]);
    if (v.score < 1 || v.score > 10)
      throw ScoreOutOfRange("guidance score " + std::to_string(v.score) + " outside [1,10]");
    if (obj.contains("thought") && obj["thought"].is_string())
      v.thought = util::trim(obj["thought"].get<std::string>());
    if (v.thought.empty()) throw MalformedJson("guidance judge reply lacks a thought string");
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
    return parse(content);
  }
}

/// Guidance task end-to-end for one (case, endpoint, config) triple.
inline GuidanceResult evaluate_guidance_case(Gateway& gateway, const ModelEndpoint& evaluated,
                                             const ModelEndpoint& user_sim,
                                             const ModelEndpoint& checker,
                                             const ModelEndpoint& judge,
                                             const PromptLibrary& prompts, const EvalCase& c,
                                             const GuidanceConfig& config,
                                             const std::string& run_id = "") {
  GuidanceResult result;
  result.case_id = c.case_id;
  result.endpoint_id = evaluated.id;
  result.run_id = run_id;
  result.transcript = run_dialogue(gateway, evaluated, user_sim, checker, prompts, c, config);
  result.verdict = judge_guidance(gateway, judge, prompts, c, result.transcript,
                                  c.case_id + "|gjudge|" + evaluated.id + "|" +
                                      std::string(to_string(config.agreeableness)) +
                                      (config.target_visible ? "" : "|notarget"));
  return result;
}

}  // namespace proeval
