#pragma once

#include <array>
#include <optional>
#include <set>
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

inline constexpr int kDefaultMaxRefinementRounds = 5;
inline constexpr int kFinalCheckValidators = 5;

/// Three reasoners of different capability plus the judge that decides
/// whether a predicted target matches the reference.
struct DifficultyProbe {
  std::vector<ModelEndpoint> probe_endpoints;
  ModelEndpoint similarity_judge;
};

inline void validate_probe(const DifficultyProbe& probe) {
  if (probe.probe_endpoints.size() != 3)
    throw ConfigError("difficulty probe needs exactly 3 endpoints, got " +
                      std::to_string(probe.probe_endpoints.size()));
  std::set<std::string> ids;
  for (const auto& e : probe.probe_endpoints)
    if (!ids.insert(e.id).second)
      throw ConfigError("difficulty probe endpoints must be distinct; '" + e.id + "' repeats");
}

/// n_correct of n_probes reasoners recovered the target. Majority correct =>
/// still easy; exactly none => hard; anything between => fair.
inline Tier classify_tier(int n_correct, int n_probes = 3) {
  if (n_probes < 1) throw Error("classify_tier needs n_probes >= 1");
  if (n_correct < 0 || n_correct > n_probes)
    throw Error("n_correct " + std::to_string(n_correct) + " outside [0," +
                std::to_string(n_probes) + "]");
  if (2 * n_correct > n_probes) return Tier::easy;
  if (n_correct == 0) return Tier::hard;
  return Tier::fair;
}

/// Yes/no verdict on whether a predicted target conveys the reference's
/// meaning. One re-ask on an unusable reply, then MalformedJudgment.
inline bool judge_similar(Gateway& gateway, const ModelEndpoint& judge,
                          const PromptLibrary& prompts, const std::string& reference,
                          const std::string& prediction, const std::string& cache_salt = "") {
  std::string prompt =
      prompts.fill("similarity_judge", {{"reference", reference}, {"prediction", prediction}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> bool {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("judge")) throw MalformedJudgment("similarity reply lacks 'judge'");
    std::string verdict = util::to_lower(util::trim(
        obj["judge"].is_string() ? obj["judge"].get<std::string>() : obj["judge"].dump()));
    if (verdict == "yes" || verdict == "true") return true;
    if (verdict == "no" || verdict == "false") return false;
    throw MalformedJudgment("similarity verdict '" + verdict + "' is not yes/no");
  };

  CompleteOptions options;
  options.cache_salt = cache_salt;
  std::string content = gateway.complete(judge, messages, options).content;
  try {
    return parse(content);
  } catch (const Error&) {
    options.cache_salt = cache_salt + "|reask1";
    content = gateway.complete(judge, messages, options).content;
    try {
      return parse(content);
    } catch (const MalformedJudgment&) {
      throw;
    } catch (const Error& e) {
      throw MalformedJudgment(std::string("similarity judge unusable after re-ask: ") + e.what());
    }
  }
}

/// Each probe endpoint predicts a target from the environment alone; the
/// similarity judge counts how many predictions match the reference.
inline int probe_difficulty(Gateway& gateway, const DifficultyProbe& probe,
                            const PromptLibrary& prompts, const DomainSpec& domain,
                            const EvalCase& c, const std::string& cache_salt = "",
                            int workers = 3) {
  validate_probe(probe);
  std::string prompt = prompts.fill(
      "target_gen", {{"description", compose_description(domain, c.topic_path)},
                     {"example", detail::plan_examples_block(domain)},
                     {"environment", detail::environment_json(c.environment)}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  std::vector<std::optional<std::string>> predictions(probe.probe_endpoints.size());
  std::vector<size_t> indices(probe.probe_endpoints.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  util::parallel_for_each(indices, workers, [&](size_t i) {
    CompleteOptions options;
    options.cache_salt = cache_salt + "|probe" + std::to_string(i);
    std::string content = gateway.complete(probe.probe_endpoints[i], messages, options).content;
    try {
      predictions[i] = parse_plan_text(content).target;
      return;
    } catch (const NoJsonFound&) {
    } catch (const MalformedJson&) {
    }
    options.cache_salt = cache_salt + "|probe" + std::to_string(i) + "|reask1";
    content = gateway.complete(probe.probe_endpoints[i], messages, options).content;
    try {
      predictions[i] = parse_plan_text(content).target;
    } catch (const NoJsonFound&) {    // unusable prediction counts as incorrect
    } catch (const MalformedJson&) {
    }
  });

  int n_correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (!predictions[i]) continue;
    if (judge_similar(gateway, probe.similarity_judge, prompts, c.reference_plan.target,
                      *predictions[i], cache_salt + "|judge" + std::to_string(i)))
      ++n_correct;
  }
  return n_correct;
}

namespace detail {

inline std::optional<std::string> strip_output_prefix(const std::string& content) {
  std::string t = util::trim(content);
  constexpr std::string_view prefix = "Output:";
  if (t.size() < prefix.size() || std::string_view(t).substr(0, prefix.size()) != prefix)
    return std::nullopt;
  return util::trim(t.substr(prefix.size()));
}

inline const std::set<std::string>& stopwords() {
  static const std::set<std::string> words{
      "a",    "an",  "and", "are", "as",  "at",   "be",  "by",   "for", "from", "has",
      "have", "he",  "her", "his", "in",  "is",   "it",  "its",  "of",  "on",   "or",
      "she",  "the", "their", "them", "they", "this", "to", "user", "was", "with", "will"};
  return words;
}

inline std::vector<std::string> content_words(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& raw : util::split_words(text)) {
    std::string w = util::to_lower(util::strip_punct(raw));
    if (w.size() > 2 && !stopwords().count(w)) out.push_back(w);
  }
  return out;
}

inline bool mentions_any_content_word(const std::string& text, const std::string& reference) {
  auto words = content_words(reference);
  if (words.empty()) return true;
  for (const auto& w : words)
    if (util::contains_ci(text, w)) return true;
  return false;
}

inline std::string rewrite_examples_block(const std::vector<RewriteExample>& examples) {
  std::string block;
  for (const auto& e : examples) {
    block += "Input: " + e.input + "\n";
    if (!e.target.empty()) block += "Target: " + e.target + "\n";
    block += "Output: " + e.output + "\n\n";
  }
  return block;
}

}  // namespace detail

enum class EnvField { user_information, trigger_factor };

inline std::string_view to_string(EnvField f) {
  return f == EnvField::user_information ? "user_information" : "trigger_factor";
}

namespace detail {

/// Shared logic for both rewrite flavors: one transport call per attempt,
/// "Output: " prefix required (one re-ask), echo of the input rejected.
/// `keyword_guard` non-empty => the rewrite must still mention at least one
/// content word of it (soft: re-ask once, then accept with a warning).
inline std::string run_rewrite(Gateway& gateway, const ModelEndpoint& rewriter,
                               const std::string& prompt, const std::string& input,
                               const std::string& keyword_guard, const std::string& cache_salt,
                               std::vector<std::string>* warnings) {
  std::vector<ChatMessage> messages{user_message(prompt)};
  std::optional<std::string> keyword_fallback;
  for (int attempt = 0; attempt < 2; ++attempt) {
    CompleteOptions options;
    options.cache_salt = attempt == 0 ? cache_salt : cache_salt + "|reask1";
    std::string content = gateway.complete(rewriter, messages, options).content;
    auto stripped = strip_output_prefix(content);
    if (!stripped) {
      if (attempt == 0) continue;
      if (keyword_fallback) break;  // keep the earlier usable rewrite
      throw MissingOutputPrefix("rewrite reply does not start with 'Output:'");
    }
    if (stripped->empty()) throw EmptyField("rewrite produced empty text");
    if (util::trim(*stripped) == util::trim(input))
      throw NoChange("rewrite returned the input unchanged");
    if (!keyword_guard.empty() && !mentions_any_content_word(*stripped, keyword_guard)) {
      keyword_fallback = *stripped;
      if (attempt == 0) continue;
      break;
    }
    return *stripped;
  }
  // Both attempts dropped every content word of the target; accept anyway.
  if (warnings)
    warnings->push_back("rewrite no longer mentions any content word of the target '" +
                        keyword_guard + "'");
  return *keyword_fallback;
}

}  // namespace detail

/// Rewrites one environment field into dispersed, concrete detail.
inline std::string obfuscate_field(Gateway& gateway, const ModelEndpoint& rewriter,
                                   const PromptLibrary& prompts, const DomainSpec& domain,
                                   const EnvironmentProfile& env, EnvField field,
                                   const TargetPlan& reference, const std::string& cache_salt = "",
                                   std::vector<std::string>* warnings = nullptr) {
  const bool is_user = field == EnvField::user_information;
  const std::string& input = is_user ? env.user_information : env.trigger_factor;
  if (util::trim(input).empty()) throw EmptyField("cannot rewrite an empty field");

  std::string prompt;
  std::string keyword_guard;
  if (is_user) {
    auto it = domain.rewrite_examples.find("user_information");
    prompt = prompts.fill(
        "obfuscate_user_information",
        {{"Domain_Rule", domain.obfuscation_rule},
         {"Examples", detail::rewrite_examples_block(
                          it == domain.rewrite_examples.end() ? std::vector<RewriteExample>{}
                                                              : it->second)},
         {"user_information", input}});
  } else {
    auto it = domain.rewrite_examples.find("trigger_factor");
    prompt = prompts.fill(
        "obfuscate_trigger_factor",
        {{"domain_rule", domain.obfuscation_rule},
         {"example", detail::rewrite_examples_block(it == domain.rewrite_examples.end()
                                                        ? std::vector<RewriteExample>{}
                                                        : it->second)},
         {"trigger_factor", input},
         {"target", reference.target}});
    keyword_guard = reference.target;
  }
  return detail::run_rewrite(gateway, rewriter, prompt, input, keyword_guard, cache_salt,
                             warnings);
}

/// Buries one environment field inside plausible-but-irrelevant detail.
/// The original sentences must survive; ideally embedded, not edge-glued.
inline std::string inject_noise(Gateway& gateway, const ModelEndpoint& injector,
                                const PromptLibrary& prompts, const DomainSpec& domain,
                                const EnvironmentProfile& env, EnvField field,
                                const TargetPlan& reference, const std::string& cache_salt = "",
                                std::vector<std::string>* warnings = nullptr) {
  const bool is_user = field == EnvField::user_information;
  const std::string& input = is_user ? env.user_information : env.trigger_factor;
  if (util::trim(input).empty()) throw EmptyField("cannot add noise to an empty field");

  std::string prompt;
  std::string keyword_guard;
  if (is_user) {
    auto it = domain.noise_examples.find("user_information");
    prompt = prompts.fill(
        "noise_user_information",
        {{"example", detail::rewrite_examples_block(it == domain.noise_examples.end()
                                                        ? std::vector<RewriteExample>{}
                                                        : it->second)},
         {"user_information", input}});
  } else {
    auto it = domain.noise_examples.find("trigger_factor");
    prompt = prompts.fill(
        "noise_trigger_factor",
        {{"example", detail::rewrite_examples_block(it == domain.noise_examples.end()
                                                        ? std::vector<RewriteExample>{}
                                                        : it->second)},
         {"trigger_factor", input},
         {"target", reference.target}});
    keyword_guard = reference.target;
  }
  std::string result =
      detail::run_rewrite(gateway, injector, prompt, input, keyword_guard, cache_salt, warnings);

  auto sentences = util::split_sentences(input);
  size_t survived = 0;
  for (const auto& s : sentences)
    if (result.find(s) != std::string::npos) ++survived;
  if (2 * survived < sentences.size())
    throw OriginalDropped("only " + std::to_string(survived) + " of " +
                          std::to_string(sentences.size()) +
                          " original sentences survive the noise rewrite");

  std::string trimmed_input = util::trim(input);
  std::string trimmed_result = util::trim(result);
  bool is_prefix = trimmed_result.rfind(trimmed_input, 0) == 0;
  bool is_suffix = trimmed_result.size() >= trimmed_input.size() &&
                   trimmed_result.compare(trimmed_result.size() - trimmed_input.size(),
                                          trimmed_input.size(), trimmed_input) == 0;
  if ((is_prefix || is_suffix) && warnings)
    warnings->push_back(std::string("noise was ") + (is_prefix ? "appended after" : "prepended before") +
                        " the original text instead of interleaved");
  return result;
}

/// Hardens an easy case: rounds of (obfuscate both fields, noise both
/// fields) with a re-probe after each, until the tier drops or the round
/// budget runs out. Cases arriving with a settled non-easy tier pass
/// through untouched; unprobed cases get their first probe here.
inline EvalCase refine_case(Gateway& gateway, const DifficultyProbe& probe,
                            const ModelEndpoint& rewriter, const PromptLibrary& prompts,
                            const DomainSpec& domain, EvalCase c,
                            int max_rounds = kDefaultMaxRefinementRounds,
                            std::vector<std::string>* warnings = nullptr) {
  if (c.tier && *c.tier != Tier::easy) return c;
  const std::string salt_base = c.case_id;
  int n_probes = static_cast<int>(probe.probe_endpoints.size());

  if (!c.tier) {
    int n = probe_difficulty(gateway, probe, prompts, domain, c, salt_base + "|probe|r0");
    c.tier = classify_tier(n, n_probes);
    if (*c.tier != Tier::easy) return c;
  }

  while (c.refinement_rounds < max_rounds) {
    int round = ++c.refinement_rounds;
    auto apply = [&](const char* action, EnvField field, bool noise) {
      std::string& slot = field == EnvField::user_information ? c.environment.user_information
                                                              : c.environment.trigger_factor;
      std::string salt = salt_base + "|" + action + "|r" + std::to_string(round);
      std::string after =
          noise ? inject_noise(gateway, rewriter, prompts, domain, c.environment, field,
                               c.reference_plan, salt, warnings)
                : obfuscate_field(gateway, rewriter, prompts, domain, c.environment, field,
                                  c.reference_plan, salt, warnings);
      c.history.push_back({round, action, slot, after});
      slot = std::move(after);
    };
    apply("obfuscate_user", EnvField::user_information, false);
    apply("obfuscate_trigger", EnvField::trigger_factor, false);
    apply("noise_user", EnvField::user_information, true);
    apply("noise_trigger", EnvField::trigger_factor, true);

    int n = probe_difficulty(gateway, probe, prompts, domain, c,
                             salt_base + "|probe|r" + std::to_string(round));
    c.tier = classify_tier(n, n_probes);
    if (*c.tier != Tier::easy) return c;
  }
  c.tier = Tier::discarded;
  return c;
}

/// Five validators each judge whether the reference is the best possible
/// target for the scenario; majority "True" accepts the case. A validator
/// whose reply stays unusable after one re-ask votes "False".
inline bool final_check(Gateway& gateway, const std::vector<ModelEndpoint>& validators,
                        const PromptLibrary& prompts, const DomainSpec& domain, EvalCase& c,
                        const std::string& cache_salt = "", int workers = 5) {
  if (static_cast<int>(validators.size()) != kFinalCheckValidators)
    throw ConfigError("final check needs exactly " + std::to_string(kFinalCheckValidators) +
                      " validators, got " + std::to_string(validators.size()));
  std::string prompt = prompts.fill(
      "final_check",
      {{"description", compose_description(domain, c.topic_path)},
       {"environment", detail::environment_json(c.environment)},
       {"target", c.reference_plan.target},
       {"sub_targets", nlohmann::json(c.reference_plan.sub_targets).dump()}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [](const std::string& content) -> bool {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("judge")) throw MalformedJudgment("final-check reply lacks 'judge'");
    std::string verdict = util::to_lower(util::trim(
        obj["judge"].is_string() ? obj["judge"].get<std::string>() : obj["judge"].dump()));
    if (verdict == "true") return true;
    if (verdict == "false") return false;
    throw MalformedJudgment("final-check verdict '" + verdict + "' is not True/False");
  };

  // plain ints: vector<bool> packs bits and is unsafe to write concurrently
  std::vector<int> votes(validators.size(), 0);
  std::vector<size_t> indices(validators.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::string salt_base = cache_salt.empty() ? c.case_id : cache_salt;
  util::parallel_for_each(indices, workers, [&](size_t i) {
    CompleteOptions options;
    options.cache_salt = salt_base + "|val" + std::to_string(i);
    std::string content = gateway.complete(validators[i], messages, options).content;
    try {
      votes[i] = parse(content) ? 1 : 0;
      return;
    } catch (const NoJsonFound&) {
    } catch (const MalformedJson&) {
    } catch (const MalformedJudgment&) {
    }
    options.cache_salt = salt_base + "|val" + std::to_string(i) + "|reask1";
    content = gateway.complete(validators[i], messages, options).content;
    try {
      votes[i] = parse(content) ? 1 : 0;
    } catch (const NoJsonFound&) {  // an unusable validator cannot vouch for the case
    } catch (const MalformedJson&) {
    } catch (const MalformedJudgment&) {
    }
  });

  int yes = 0;
  c.validator_votes.clear();
  for (int v : votes) {
    yes += v;
    c.validator_votes.push_back(v != 0);
  }
  c.validated = yes * 2 > static_cast<int>(validators.size());
  return c.validated;
}

}  // namespace proeval
