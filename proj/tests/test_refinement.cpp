#include "proeval/refinement.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "proeval/domains.hpp"
#include "proeval/prompts.hpp"

using namespace proeval;
using nlohmann::json;

namespace {

ModelEndpoint scripted(const std::string& id) {
  ModelEndpoint e;
  e.id = id;
  e.kind = EndpointKind::scripted;
  return e;
}

std::string plan_reply(const std::string& target, const std::vector<std::string>& subs) {
  return json{{"Target", target}, {"sub_target", subs}}.dump();
}

std::string judge_reply(bool yes) { return json{{"reason", "r"}, {"judge", yes ? "yes" : "no"}}.dump(); }

std::string check_reply(bool accept) {
  return json{{"reason", "r"}, {"judge", accept ? "True" : "False"}}.dump();
}

struct Fixture {
  Gateway gateway;
  PromptLibrary prompts;
  DomainRegistry domains;
  const DomainSpec& spec = domains.get(DomainId::recommendation);

  DifficultyProbe probe;
  ModelEndpoint rewriter = scripted("rewriter");

  Fixture() {
    probe.probe_endpoints = {scripted("probe-a"), scripted("probe-b"), scripted("probe-c")};
    probe.similarity_judge = scripted("judge");
  }

  // r probes answering with a parseable plan, one entry per expected call
  void script_probes(int calls) {
    std::vector<std::string> entries(static_cast<size_t>(calls),
                                     plan_reply("Recommend jazz", {"a", "b"}));
    for (const char* id : {"probe-a", "probe-b", "probe-c"})
      gateway.set_script(id, script_of(entries));
  }

  void script_judge(const std::vector<bool>& verdicts) {
    std::vector<std::string> entries;
    for (bool v : verdicts) entries.push_back(judge_reply(v));
    gateway.set_script("judge", script_of(entries));
  }

  // rewriter entries for `rounds` full refinement rounds; each round is
  // obfuscate_user, obfuscate_trigger, noise_user, noise_trigger in order
  void script_rewriter(int rounds) {
    std::vector<std::string> entries;
    for (int r = 1; r <= rounds; ++r) {
      entries.push_back("Output: U" + std::to_string(r) + " detail.");
      entries.push_back("Output: T" + std::to_string(r) + " jazz.");
      entries.push_back("Output: U" + std::to_string(r) + " detail. Filler u" +
                        std::to_string(r) + ".");
      entries.push_back("Output: T" + std::to_string(r) + " jazz. Filler t" +
                        std::to_string(r) + ".");
    }
    gateway.set_script("rewriter", script_of(entries));
  }
};

EvalCase make_case() {
  EvalCase c;
  c.case_id = "recommendation-0000abcd-000";
  c.domain = DomainId::recommendation;
  c.topic_path = {"recommendation", "music"};
  c.environment.user_information = "U0 origin.";
  c.environment.trigger_factor = "T0 jazz.";
  c.reference_plan.target = "Recommend jazz";
  c.reference_plan.sub_targets = {"raise the topic", "suggest a playlist"};
  c.seed = 7;
  return c;
}

}  // namespace

TEST(ClassifyTier, MapsCorrectCountsForThreeProbes) {
  EXPECT_EQ(classify_tier(0, 3), Tier::hard);
  EXPECT_EQ(classify_tier(1, 3), Tier::fair);
  EXPECT_EQ(classify_tier(2, 3), Tier::easy);
  EXPECT_EQ(classify_tier(3, 3), Tier::easy);
}

TEST(ClassifyTier, GeneralizesToOtherPanelSizes) {
  EXPECT_EQ(classify_tier(0, 5), Tier::hard);
  EXPECT_EQ(classify_tier(1, 5), Tier::fair);
  EXPECT_EQ(classify_tier(2, 5), Tier::fair);
  EXPECT_EQ(classify_tier(3, 5), Tier::easy);
  EXPECT_EQ(classify_tier(5, 5), Tier::easy);
  EXPECT_EQ(classify_tier(1, 1), Tier::easy);
  EXPECT_EQ(classify_tier(0, 1), Tier::hard);
}

TEST(ClassifyTier, RejectsOutOfRangeCounts) {
  EXPECT_THROW(classify_tier(-1, 3), Error);
  EXPECT_THROW(classify_tier(4, 3), Error);
  EXPECT_THROW(classify_tier(0, 0), Error);
}

TEST(JudgeSimilar, ReadsYesNoVerdicts) {
  Fixture f;
  f.gateway.set_script("judge", script_of({R"({"reason": "close match", "judge": "yes"})",
                                           R"({"judge": " No "})",
                                           R"({"judge": true})",
                                           R"({"judge": "FALSE"})"}));
  EXPECT_TRUE(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"));
  EXPECT_FALSE(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"));
  EXPECT_TRUE(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"));
  EXPECT_FALSE(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"));
}

TEST(JudgeSimilar, OneReaskThenMalformedJudgment) {
  Fixture f;
  f.gateway.set_script("judge", script_of({"no idea", judge_reply(true)}));
  EXPECT_TRUE(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"));

  f.gateway.set_script("judge", script_of({"no idea", R"({"judge": "perhaps"})"}));
  EXPECT_THROW(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"),
               MalformedJudgment);

  f.gateway.set_script("judge", script_of({"no idea", "still no idea"}));
  EXPECT_THROW(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"),
               MalformedJudgment);
}

TEST(JudgeSimilar, TransportErrorsPropagate) {
  Fixture f;
  f.gateway.set_script("judge", script_of({}));
  EXPECT_THROW(judge_similar(f.gateway, f.probe.similarity_judge, f.prompts, "ref", "pred"),
               ScriptExhausted);
}

TEST(ProbeDifficulty, CountsJudgeAcceptedPredictions) {
  Fixture f;
  f.script_probes(1);
  f.script_judge({true, true, false});
  EXPECT_EQ(probe_difficulty(f.gateway, f.probe, f.prompts, f.spec, make_case()), 2);
}

TEST(ProbeDifficulty, UnparseablePredictionCountsIncorrectAfterReask) {
  Fixture f;
  // probe-a never produces a plan; b and c do
  f.gateway.set_script("probe-a", script_of({"prose", "more prose"}));
  f.gateway.set_script("probe-b", script_of({plan_reply("t", {"a", "b"})}));
  f.gateway.set_script("probe-c", script_of({plan_reply("t", {"a", "b"})}));
  // exactly two similarity judgments happen; a third call would exhaust
  f.script_judge({true, true});
  EXPECT_EQ(probe_difficulty(f.gateway, f.probe, f.prompts, f.spec, make_case()), 2);
}

TEST(ProbeDifficulty, PanelShapeIsEnforced) {
  Fixture f;
  DifficultyProbe two;
  two.probe_endpoints = {scripted("a"), scripted("b")};
  two.similarity_judge = scripted("judge");
  EXPECT_THROW(validate_probe(two), ConfigError);

  DifficultyProbe dup;
  dup.probe_endpoints = {scripted("a"), scripted("a"), scripted("b")};
  dup.similarity_judge = scripted("judge");
  EXPECT_THROW(validate_probe(dup), ConfigError);
}

TEST(ObfuscateField, ReturnsTextAfterOutputPrefix) {
  Fixture f;
  f.gateway.set_script("rewriter",
                       script_of({"Output:  She hums along to late-night radio.  "}));
  EvalCase c = make_case();
  std::string out = obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                                    EnvField::user_information, c.reference_plan);
  EXPECT_EQ(out, "She hums along to late-night radio.");
}

TEST(ObfuscateField, MissingPrefixGetsOneReask) {
  Fixture f;
  f.gateway.set_script("rewriter", script_of({"She hums along.", "Output: She hums along."}));
  EvalCase c = make_case();
  EXPECT_EQ(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                            EnvField::user_information, c.reference_plan),
            "She hums along.");

  f.gateway.set_script("rewriter", script_of({"no prefix", "still no prefix"}));
  EXPECT_THROW(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                               EnvField::user_information, c.reference_plan),
               MissingOutputPrefix);
}

TEST(ObfuscateField, EchoAndEmptyAreRejectedImmediately) {
  Fixture f;
  EvalCase c = make_case();
  // echoing the input back is an instant failure, no re-ask
  f.gateway.set_script("rewriter", script_of({"Output: " + c.environment.user_information}));
  EXPECT_THROW(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                               EnvField::user_information, c.reference_plan),
               NoChange);

  f.gateway.set_script("rewriter", script_of({"Output:   "}));
  EXPECT_THROW(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                               EnvField::user_information, c.reference_plan),
               EmptyField);
}

TEST(ObfuscateField, TriggerRewriteMustKeepTargetReachable) {
  Fixture f;
  EvalCase c = make_case();  // target "Recommend jazz"

  // keyword dropped once, recovered on the re-ask -> no warning
  f.gateway.set_script("rewriter", script_of({"Output: Something entirely unrelated.",
                                              "Output: Evenings call for jazz records."}));
  std::vector<std::string> warnings;
  EXPECT_EQ(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                            EnvField::trigger_factor, c.reference_plan, "", &warnings),
            "Evenings call for jazz records.");
  EXPECT_TRUE(warnings.empty());

  // keyword dropped twice -> last rewrite accepted, with a warning
  f.gateway.set_script("rewriter", script_of({"Output: Nothing relevant one.",
                                              "Output: Nothing relevant two."}));
  EXPECT_EQ(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                            EnvField::trigger_factor, c.reference_plan, "", &warnings),
            "Nothing relevant two.");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("Recommend jazz"), std::string::npos);
}

TEST(ObfuscateField, UserRewriteHasNoKeywordGuard) {
  Fixture f;
  EvalCase c = make_case();
  f.gateway.set_script("rewriter", script_of({"Output: Totally unrelated prose."}));
  std::vector<std::string> warnings;
  EXPECT_EQ(obfuscate_field(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                            EnvField::user_information, c.reference_plan, "", &warnings),
            "Totally unrelated prose.");
  EXPECT_TRUE(warnings.empty());
}

TEST(InjectNoise, InterleavedNoiseKeepsOriginalSentences) {
  Fixture f;
  EvalCase c = make_case();
  c.environment.user_information = "She codes at night. She drinks green tea.";
  f.gateway.set_script(
      "rewriter",
      script_of({"Output: She codes at night. Her balcony faces a noisy street. "
                 "She drinks green tea. The neighbor's cat visits on Sundays."}));
  std::vector<std::string> warnings;
  std::string out = inject_noise(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                                 EnvField::user_information, c.reference_plan, "", &warnings);
  EXPECT_NE(out.find("She codes at night."), std::string::npos);
  EXPECT_TRUE(warnings.empty());
}

TEST(InjectNoise, DroppingOriginalSentencesFails) {
  Fixture f;
  EvalCase c = make_case();
  c.environment.user_information =
      "First fact here. Second fact here. Third fact here. Fourth fact here.";
  f.gateway.set_script("rewriter",
                       script_of({"Output: First fact here. Everything else is new prose now."}));
  EXPECT_THROW(inject_noise(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                            EnvField::user_information, c.reference_plan),
               OriginalDropped);
}

TEST(InjectNoise, EdgeGluedNoiseIsOnlyAWarning) {
  Fixture f;
  EvalCase c = make_case();
  c.environment.user_information = "She codes at night.";
  f.gateway.set_script(
      "rewriter", script_of({"Output: She codes at night. A fresh unrelated detail follows."}));
  std::vector<std::string> warnings;
  std::string out = inject_noise(f.gateway, f.rewriter, f.prompts, f.spec, c.environment,
                                 EnvField::user_information, c.reference_plan, "", &warnings);
  EXPECT_NE(out.find("A fresh unrelated detail"), std::string::npos);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("appended after"), std::string::npos);
}

TEST(RefineCase, NonEasyTiersPassThroughUntouched) {
  Fixture f;  // no scripts registered: any model call would fail loudly
  for (Tier tier : {Tier::fair, Tier::hard, Tier::discarded}) {
    EvalCase c = make_case();
    c.tier = tier;
    EvalCase out = refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, c);
    EXPECT_EQ(out.tier, tier);
    EXPECT_EQ(out.refinement_rounds, 0);
    EXPECT_TRUE(out.history.empty());
    EXPECT_EQ(out.environment.user_information, c.environment.user_information);
  }
}

TEST(RefineCase, UnprobedCaseLandingNonEasySkipsRewrites) {
  Fixture f;
  f.script_probes(1);
  f.script_judge({false, false, false});
  EvalCase out = refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, make_case());
  EXPECT_EQ(out.tier, Tier::hard);
  EXPECT_EQ(out.refinement_rounds, 0);
  EXPECT_TRUE(out.history.empty());
}

TEST(RefineCase, OneRoundLowersEasyToFair) {
  Fixture f;
  f.script_probes(2);  // initial probe + one re-probe
  // r0: all three correct (easy); r1: one correct (fair)
  f.script_judge({true, true, true, true, false, false});
  f.script_rewriter(1);

  EvalCase original = make_case();
  EvalCase out = refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, original);

  EXPECT_EQ(out.tier, Tier::fair);
  EXPECT_EQ(out.refinement_rounds, 1);
  ASSERT_EQ(out.history.size(), 4u);
  EXPECT_EQ(out.history[0].action, "obfuscate_user");
  EXPECT_EQ(out.history[1].action, "obfuscate_trigger");
  EXPECT_EQ(out.history[2].action, "noise_user");
  EXPECT_EQ(out.history[3].action, "noise_trigger");
  for (const auto& record : out.history) EXPECT_EQ(record.round, 1);

  // the rewrite chain threads each output into the next input
  EXPECT_EQ(out.history[0].before, original.environment.user_information);
  EXPECT_EQ(out.history[0].after, "U1 detail.");
  EXPECT_EQ(out.history[2].before, "U1 detail.");
  EXPECT_EQ(out.history[2].after, "U1 detail. Filler u1.");
  EXPECT_EQ(out.environment.user_information, "U1 detail. Filler u1.");
  EXPECT_EQ(out.environment.trigger_factor, "T1 jazz. Filler t1.");
}

TEST(RefineCase, AlreadyProbedEasySkipsInitialProbe) {
  Fixture f;
  f.script_probes(1);  // only the re-probe after the round
  f.script_judge({false, false, false});
  f.script_rewriter(1);
  EvalCase c = make_case();
  c.tier = Tier::easy;
  EvalCase out = refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, c);
  EXPECT_EQ(out.tier, Tier::hard);
  EXPECT_EQ(out.refinement_rounds, 1);
  EXPECT_EQ(out.history.size(), 4u);
}

TEST(RefineCase, StubbornlyEasyCaseIsDiscardedAfterFiveRounds) {
  Fixture f;
  f.script_probes(6);  // initial + 5 re-probes
  f.script_judge(std::vector<bool>(18, true));
  f.script_rewriter(5);

  EvalCase out = refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, make_case());

  EXPECT_EQ(out.tier, Tier::discarded);
  EXPECT_EQ(out.refinement_rounds, 5);
  ASSERT_EQ(out.history.size(), 20u);
  for (int r = 0; r < 5; ++r) {
    EXPECT_EQ(out.history[static_cast<size_t>(4 * r)].round, r + 1);
    EXPECT_EQ(out.history[static_cast<size_t>(4 * r)].action, "obfuscate_user");
    EXPECT_EQ(out.history[static_cast<size_t>(4 * r + 3)].action, "noise_trigger");
  }

  // every scripted probe/judge/rewrite entry was consumed: exactly 6 probes
  // per endpoint, 18 judgments, 20 rewrites
  EXPECT_THROW(f.gateway.complete(f.probe.probe_endpoints[0], {user_message("x")}),
               ScriptExhausted);
  EXPECT_THROW(f.gateway.complete(f.probe.similarity_judge, {user_message("x")}),
               ScriptExhausted);
  EXPECT_THROW(f.gateway.complete(f.rewriter, {user_message("x")}), ScriptExhausted);
}

TEST(RefineCase, HonorsCustomRoundBudget) {
  Fixture f;
  f.script_probes(3);  // initial + 2 rounds
  f.script_judge(std::vector<bool>(9, true));
  f.script_rewriter(2);
  EvalCase out =
      refine_case(f.gateway, f.probe, f.rewriter, f.prompts, f.spec, make_case(), /*max_rounds=*/2);
  EXPECT_EQ(out.tier, Tier::discarded);
  EXPECT_EQ(out.refinement_rounds, 2);
  EXPECT_EQ(out.history.size(), 8u);
}

namespace {

std::vector<ModelEndpoint> make_validators(Gateway& gateway, unsigned vote_mask,
                                           int count = kFinalCheckValidators) {
  std::vector<ModelEndpoint> validators;
  for (int i = 0; i < count; ++i) {
    std::string id = "validator-" + std::to_string(i);
    validators.push_back(scripted(id));
    gateway.set_script(id, script_of({check_reply((vote_mask >> i) & 1u)}));
  }
  return validators;
}

}  // namespace

TEST(FinalCheck, AllThirtyTwoVotePatternsFollowMajority) {
  Fixture f;
  for (unsigned mask = 0; mask < 32; ++mask) {
    Gateway gateway;
    auto validators = make_validators(gateway, mask);
    EvalCase c = make_case();
    bool accepted = final_check(gateway, validators, f.prompts, f.spec, c);

    int yes = __builtin_popcount(mask);
    EXPECT_EQ(accepted, yes >= 3) << "mask=" << mask;
    EXPECT_EQ(c.validated, yes >= 3) << "mask=" << mask;
    ASSERT_EQ(c.validator_votes.size(), 5u);
    for (int i = 0; i < 5; ++i)
      EXPECT_EQ(c.validator_votes[static_cast<size_t>(i)], ((mask >> i) & 1u) != 0)
          << "mask=" << mask << " validator=" << i;
  }
}

TEST(FinalCheck, RequiresExactlyFiveValidators) {
  Fixture f;
  Gateway gateway;
  auto four = make_validators(gateway, 0xf, 4);
  EvalCase c = make_case();
  EXPECT_THROW(final_check(gateway, four, f.prompts, f.spec, c), ConfigError);
}

TEST(FinalCheck, UnusableValidatorVotesFalse) {
  Fixture f;
  Gateway gateway;
  // three validators say True but one of them never answers usably
  std::vector<ModelEndpoint> validators;
  for (int i = 0; i < 5; ++i) validators.push_back(scripted("validator-" + std::to_string(i)));
  gateway.set_script("validator-0", script_of({check_reply(true)}));
  gateway.set_script("validator-1", script_of({check_reply(true)}));
  gateway.set_script("validator-2", script_of({"hmm", R"({"judge": "maybe"})"}));
  gateway.set_script("validator-3", script_of({check_reply(false)}));
  gateway.set_script("validator-4", script_of({check_reply(false)}));
  EvalCase c = make_case();
  EXPECT_FALSE(final_check(gateway, validators, f.prompts, f.spec, c));
  EXPECT_EQ(c.validator_votes, (std::vector<bool>{true, true, false, false, false}));
}

TEST(FinalCheck, TransportFailuresAreNotSwallowed) {
  Fixture f;
  Gateway gateway;
  auto validators = make_validators(gateway, 0x1f);
  gateway.set_script("validator-3", script_of({}));  // dead endpoint
  EvalCase c = make_case();
  EXPECT_THROW(final_check(gateway, validators, f.prompts, f.spec, c), ScriptExhausted);
}
