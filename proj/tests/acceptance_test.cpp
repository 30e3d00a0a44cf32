// End-to-end checks of the guarantees the library advertises, run entirely
// against scripted endpoints. Each test covers one guarantee and prints one
// pass/fail line.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proeval/orchestrator.hpp"

using namespace proeval;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("proeval-accept-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ModelEndpoint scripted(const std::string& id) {
  ModelEndpoint e;
  e.id = id;
  return e;
}

std::string env_reply(const std::string& user_information, const std::string& trigger) {
  return json{{"user_information", user_information}, {"trigger_factor", trigger}}.dump();
}

std::string plan_reply(const std::string& target, const std::vector<std::string>& subs) {
  return json{{"Target", target}, {"sub_target", subs}}.dump();
}

std::string judge_reply(bool yes) { return json{{"judge", yes ? "yes" : "no"}}.dump(); }

std::string check_reply(bool accept) {
  return json{{"reason", "r"}, {"judge", accept ? "True" : "False"}}.dump();
}

std::string verdict_reply(int score) { return json{{"reason", "r"}, {"score", score}}.dump(); }

std::string guidance_verdict(int score) {
  return json{{"thought", "t"}, {"score", score}}.dump();
}

EvalCase refinement_case() {
  EvalCase c;
  c.case_id = "recommendation-0000abcd-000";
  c.domain = DomainId::recommendation;
  c.topic_path = {"recommendation", "music"};
  c.environment.user_information = "U0 detail.";
  c.environment.trigger_factor = "T0 jazz.";
  c.reference_plan.target = "Recommend jazz";
  c.reference_plan.sub_targets = {"raise the topic", "suggest a playlist"};
  c.seed = 1;
  return c;
}

// scripted rewriter rounds: obfuscate_user, obfuscate_trigger, noise_user,
// noise_trigger. Trigger rewrites keep "jazz" so the target keyword guard
// holds; noise outputs embed the current field so the original survives.
std::vector<std::string> rewriter_rounds(int rounds) {
  std::vector<std::string> out;
  for (int r = 1; r <= rounds; ++r) {
    std::string n = std::to_string(r);
    out.push_back("Output: U" + n + " detail.");
    out.push_back("Output: T" + n + " jazz.");
    out.push_back("Output: U" + n + " detail. Filler u" + n + ".");
    out.push_back("Output: T" + n + " jazz. Filler t" + n + ".");
  }
  return out;
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd =
      std::string("\"") + PROEVAL_CLI_PATH + "\" " + args + " >>\"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) { return util::read_file(p); }

// Independent agreement oracle: explicit 10x10 confusion matrix with
// chance-expected counts from the marginals.
double kappa_confusion_oracle(const std::vector<int>& a, const std::vector<int>& b,
                              bool quadratic) {
  double observed[10][10] = {};
  double row[10] = {};
  double col[10] = {};
  const double n = static_cast<double>(a.size());
  for (size_t k = 0; k < a.size(); ++k) {
    observed[a[k] - 1][b[k] - 1] += 1.0;
    row[a[k] - 1] += 1.0;
    col[b[k] - 1] += 1.0;
  }
  double disagree_observed = 0.0;
  double disagree_expected = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      double d = std::abs(i - j) / 9.0;
      double w = quadratic ? d * d : d;
      disagree_observed += w * observed[i][j];
      disagree_expected += w * row[i] * col[j] / n;
    }
  return 1.0 - disagree_observed / disagree_expected;
}

}  // namespace

// Two cold CLI runs of gen-cases + refine over the same scripted config must
// produce byte-identical dataset files, and each full run stays well under
// the 30-second budget for 12 cases (2 per domain).
TEST(Acceptance, CliPipelineIsDeterministicAndFast) {
  RunConfig config;
  for (const char* id :
       {"synth", "p1", "p2", "p3", "v1", "v2", "v3", "v4", "v5", "judge"})
    config.endpoints[id] = scripted(id);
  config.roles.synthesizer = "synth";
  config.roles.probes = {"p1", "p2", "p3"};
  config.roles.validators = {"v1", "v2", "v3", "v4", "v5"};
  config.roles.judge = "judge";
  config.generation.n_candidates = 2;
  config.tree.max_depth = 1;  // trees saturate from seed topics, no model calls
  config.workers = 1;
  config.rng_seed = 4242;

  // per case: environment, two candidates, one ensemble
  std::vector<std::string> synth;
  for (int i = 0; i < 12; ++i) {
    std::string n = std::to_string(i);
    synth.push_back(env_reply("Case " + n + " user keeps quiet evenings free.",
                              "Case " + n + " flyer mentions a nearby event."));
    synth.push_back(
        plan_reply("Suggest the nearby event " + n, {"open with the week", "mention the event"}));
    synth.push_back(
        plan_reply("Plan a relaxed outing " + n, {"ask about their week", "propose the outing"}));
    synth.push_back(
        plan_reply("Bring up the event " + n, {"ease into the topic", "invite them along"}));
  }
  config.scripts["synth"] = script_of(synth);
  // every case probes to fair (1 of 3 correct), then all validators accept
  for (const char* p : {"p1", "p2", "p3"}) {
    std::vector<std::string> probes;
    for (int i = 0; i < 12; ++i) probes.push_back(plan_reply("A guessed plan", {"one", "two"}));
    config.scripts[p] = script_of(probes);
  }
  std::vector<std::string> judges;
  for (int i = 0; i < 12; ++i) {
    judges.push_back(judge_reply(true));
    judges.push_back(judge_reply(false));
    judges.push_back(judge_reply(false));
  }
  config.scripts["judge"] = script_of(judges);
  for (const char* v : {"v1", "v2", "v3", "v4", "v5"}) {
    std::vector<std::string> votes;
    for (int i = 0; i < 12; ++i) votes.push_back(check_reply(true));
    config.scripts[v] = script_of(votes);
  }

  auto pipeline = [&](const fs::path& dir) {
    std::ofstream(dir / "config.json") << json(config).dump(2);
    std::string at = " --config \"" + (dir / "config.json").string() + "\"";
    ASSERT_EQ(run_cli("gen-cases" + at + " --count 2", dir / "cli.log"), 0)
        << slurp(dir / "cli.log");
    ASSERT_EQ(run_cli("refine" + at, dir / "cli.log"), 0) << slurp(dir / "cli.log");
  };

  TempDir a, b;
  auto t0 = std::chrono::steady_clock::now();
  pipeline(a.path);
  auto t1 = std::chrono::steady_clock::now();
  pipeline(b.path);
  auto t2 = std::chrono::steady_clock::now();
  EXPECT_LT(std::chrono::duration<double>(t1 - t0).count(), 30.0);
  EXPECT_LT(std::chrono::duration<double>(t2 - t1).count(), 30.0);

  ASSERT_FALSE(slurp(a.path / "dataset.jsonl").empty());
  EXPECT_EQ(slurp(a.path / "dataset.jsonl"), slurp(b.path / "dataset.jsonl"));
  EXPECT_EQ(slurp(a.path / "refined.jsonl"), slurp(b.path / "refined.jsonl"));

  auto dataset = read_jsonl<EvalCase>(a.path / "dataset.jsonl");
  ASSERT_EQ(dataset.size(), 12u);
  std::map<DomainId, int> per_domain;
  for (const auto& c : dataset) per_domain[c.domain]++;
  for (DomainId d : kAllDomains) EXPECT_EQ(per_domain[d], 2) << to_string(d);

  auto refined = read_jsonl<EvalCase>(a.path / "refined.jsonl");
  ASSERT_EQ(refined.size(), 12u);
  for (const auto& c : refined) {
    EXPECT_EQ(c.tier, Tier::fair);
    EXPECT_TRUE(c.validated);
  }
}

// A case whose probes stay easy forever is discarded after exactly 5 rounds;
// a case that drops from 3 correct to 1 correct settles as fair after
// exactly 1 round.
TEST(Acceptance, RefinementRoundBudgetIsExact) {
  PromptLibrary prompts;
  DomainRegistry registry;
  const DomainSpec& spec = registry.get(DomainId::recommendation);
  DifficultyProbe probe{{scripted("p1"), scripted("p2"), scripted("p3")}, scripted("judge")};
  ModelEndpoint rewriter = scripted("rewriter");

  {
    // 3 of 3 correct on the unprobed round and on all 5 re-probes
    Gateway gateway;
    for (const char* p : {"p1", "p2", "p3"}) {
      std::vector<std::string> replies(6, plan_reply("Recommend jazz", {"a", "b"}));
      gateway.set_script(p, script_of(replies));
    }
    gateway.set_script("judge", script_of(std::vector<std::string>(18, judge_reply(true))));
    gateway.set_script("rewriter", script_of(rewriter_rounds(5)));

    EvalCase out = refine_case(gateway, probe, rewriter, prompts, spec, refinement_case());
    EXPECT_EQ(out.tier, Tier::discarded);
    EXPECT_EQ(out.refinement_rounds, 5);
    EXPECT_EQ(out.history.size(), 20u);  // 4 rewrites per round
    // every scripted entry was consumed: no sixth round ran, and none was skipped
    for (const auto& e : probe.probe_endpoints)
      EXPECT_THROW(gateway.complete(e, {user_message("any")}), ScriptExhausted);
    EXPECT_THROW(gateway.complete(rewriter, {user_message("any")}), ScriptExhausted);
  }
  {
    // 3 correct on the unprobed round, 1 correct after one rewrite round
    Gateway gateway;
    for (const char* p : {"p1", "p2", "p3"})
      gateway.set_script(p, script_of({plan_reply("Recommend jazz", {"a", "b"}),
                                       plan_reply("Recommend jazz", {"a", "b"})}));
    gateway.set_script("judge",
                       script_of({judge_reply(true), judge_reply(true), judge_reply(true),
                                  judge_reply(true), judge_reply(false), judge_reply(false)}));
    gateway.set_script("rewriter", script_of(rewriter_rounds(1)));

    EvalCase out = refine_case(gateway, probe, rewriter, prompts, spec, refinement_case());
    EXPECT_EQ(out.tier, Tier::fair);
    EXPECT_EQ(out.refinement_rounds, 1);
    EXPECT_EQ(out.history.size(), 4u);
    for (const auto& e : probe.probe_endpoints)
      EXPECT_THROW(gateway.complete(e, {user_message("any")}), ScriptExhausted);
  }
}

// With 3 probes: no correct prediction = hard, exactly one = fair, a
// majority = easy.
TEST(Acceptance, ProbeCorrectCountsMapOntoTiers) {
  EXPECT_EQ(classify_tier(0), Tier::hard);
  EXPECT_EQ(classify_tier(1), Tier::fair);
  EXPECT_EQ(classify_tier(2), Tier::easy);
  EXPECT_EQ(classify_tier(3), Tier::easy);
  EXPECT_THROW(classify_tier(-1), Error);
  EXPECT_THROW(classify_tier(4), Error);
}

// All 32 validator vote patterns, against a popcount oracle: the case is
// accepted exactly when at least 3 of 5 vote True.
TEST(Acceptance, ValidatorMajorityAcceptsEveryVotePattern) {
  PromptLibrary prompts;
  DomainRegistry registry;
  const DomainSpec& spec = registry.get(DomainId::recommendation);

  for (int mask = 0; mask < 32; ++mask) {
    Gateway gateway;
    std::vector<ModelEndpoint> validators;
    for (int i = 0; i < 5; ++i) {
      ModelEndpoint e = scripted("val" + std::to_string(i));
      gateway.set_script(e.id, script_of({check_reply((mask >> i & 1) != 0)}));
      validators.push_back(e);
    }
    EvalCase c = refinement_case();
    bool accepted = final_check(gateway, validators, prompts, spec, c);
    int yes = __builtin_popcount(static_cast<unsigned>(mask));
    EXPECT_EQ(accepted, yes >= 3) << "pattern " << mask;
    EXPECT_EQ(c.validated, yes >= 3) << "pattern " << mask;
    ASSERT_EQ(c.validator_votes.size(), 5u);
    for (int i = 0; i < 5; ++i)
      EXPECT_EQ(c.validator_votes[i], (mask >> i & 1) != 0) << "pattern " << mask << " vote " << i;
  }
}

// Turn cap, early stop, and the conversation memory window: a dialogue that
// never completes runs exactly 6 turns; completion at turn k ends it at k
// with no user reply that turn; the turn-5 request to the evaluated model
// carries exactly turns 2-4.
TEST(Acceptance, DialogueTurnCapEarlyStopAndMemoryWindowHold) {
  PromptLibrary prompts;
  EvalCase c = refinement_case();
  ModelEndpoint evaluated = scripted("m");
  ModelEndpoint user_sim = scripted("us");
  ModelEndpoint checker = scripted("ck");
  GuidanceConfig config;  // 6 turns, window 3

  {
    Gateway gateway;
    gateway.set_script("m", script_of({"A1", "A2", "A3", "A4", "A5", "A6"}));
    gateway.set_script("ck", script_of(std::vector<std::string>(6, "no")));
    gateway.set_script("us", script_of({"U1", "U2", "U3", "U4", "U5"}));
    std::vector<std::vector<ChatMessage>> seen;
    gateway.set_request_observer([&](const ModelEndpoint& e, const std::vector<ChatMessage>& m) {
      if (e.id == "m") seen.push_back(m);
    });

    DialogueTranscript t = run_dialogue(gateway, evaluated, user_sim, checker, prompts, c, config);
    ASSERT_EQ(t.turns.size(), 6u);
    EXPECT_EQ(t.termination, Termination::max_turns);
    for (int k = 0; k < 5; ++k) EXPECT_TRUE(t.turns[k].user_message) << "turn " << k + 1;
    EXPECT_FALSE(t.turns[5].user_message);  // nothing left to react to

    // request 5 = system + kickoff + the last 3 complete turns, nothing else
    ASSERT_EQ(seen.size(), 6u);
    const auto& payload = seen[4];
    ASSERT_EQ(payload.size(), 8u);
    EXPECT_EQ(payload[0].role, Role::system);
    EXPECT_EQ(payload[1].role, Role::user);
    const char* expected[] = {"A2", "U2", "A3", "U3", "A4", "U4"};
    for (int i = 0; i < 6; ++i) {
      EXPECT_EQ(payload[2 + i].content, expected[i]);
      EXPECT_EQ(payload[2 + i].role, i % 2 == 0 ? Role::assistant : Role::user);
    }
  }

  for (int k = 1; k <= 6; ++k) {
    Gateway gateway;
    std::vector<std::string> assistant, checks, users;
    for (int i = 1; i <= k; ++i) assistant.push_back("A" + std::to_string(i));
    for (int i = 1; i < k; ++i) {
      checks.push_back("no");
      users.push_back("U" + std::to_string(i));
    }
    checks.push_back("yes");
    gateway.set_script("m", script_of(assistant));
    gateway.set_script("ck", script_of(checks));
    gateway.set_script("us", script_of(users));

    DialogueTranscript t = run_dialogue(gateway, evaluated, user_sim, checker, prompts, c, config);
    ASSERT_EQ(t.turns.size(), static_cast<size_t>(k)) << "completion at turn " << k;
    EXPECT_EQ(t.termination, Termination::target_reached);
    EXPECT_FALSE(t.turns[k - 1].user_message) << "completion at turn " << k;
    for (int i = 0; i + 1 < k; ++i) EXPECT_TRUE(t.turns[i].user_message);
  }
}

// Hidden-target sweep: with the target withheld, none of the captured
// requests to the evaluated model contains the target or any sub-target.
TEST(Acceptance, HiddenTargetNeverAppearsInEvaluatedPayloads) {
  RunConfig config;
  for (const char* id : {"m1", "user-sim", "checker", "judge"})
    config.endpoints[id] = scripted(id);
  config.roles.evaluated = {"m1"};
  config.roles.user_sim = "user-sim";
  config.roles.checker = "checker";
  config.roles.judge = "judge";
  config.workers = 1;

  EvalCase c = refinement_case();
  c.reference_plan.target = "Recommend a vinyl night";
  c.reference_plan.sub_targets = {"mention the record fair", "suggest a listening session"};

  TempDir tmp;
  write_jsonl(tmp.path / "refined.jsonl", std::vector<EvalCase>{c});

  // full-length dialogue so the sweep sees every turn's payload
  config.scripts["m1"] = script_of({"O1", "O2", "O3", "O4", "O5", "O6"});
  config.scripts["checker"] = script_of(std::vector<std::string>(6, "no"));
  config.scripts["user-sim"] = script_of({"U1", "U2", "U3", "U4", "U5"});
  config.scripts["judge"] = script_of({guidance_verdict(4)});
  {
    Orchestrator orch(config, tmp.path);
    auto outcome =
        orch.eval_guide(tmp.path / "refined.jsonl", tmp.path / "guidance.jsonl",
                        {Agreeableness::medium}, /*no_target=*/true, false,
                        tmp.path / "payloads.jsonl");
    ASSERT_TRUE(outcome.complete());
  }
  auto payloads = read_jsonl<json>(tmp.path / "payloads.jsonl");
  ASSERT_EQ(payloads.size(), 6u);
  for (const auto& line : payloads) {
    std::string flat = line.dump();
    EXPECT_EQ(flat.find("Recommend a vinyl night"), std::string::npos);
    EXPECT_EQ(flat.find("mention the record fair"), std::string::npos);
    EXPECT_EQ(flat.find("suggest a listening session"), std::string::npos);
  }

  // control: with the target visible the same sweep does find it
  config.scripts["m1"] = script_of({"O1"});
  config.scripts["checker"] = script_of({"yes"});
  config.scripts["judge"] = script_of({guidance_verdict(9)});
  {
    Orchestrator orch(config, tmp.path);
    auto outcome =
        orch.eval_guide(tmp.path / "refined.jsonl", tmp.path / "g2.jsonl",
                        {Agreeableness::medium}, /*no_target=*/false, false,
                        tmp.path / "p2.jsonl");
    ASSERT_TRUE(outcome.complete());
  }
  auto control = read_jsonl<json>(tmp.path / "p2.jsonl");
  ASSERT_FALSE(control.empty());
  EXPECT_NE(control[0].dump().find("Recommend a vinyl night"), std::string::npos);
}

// Plan contract: generated datasets only contain targets under 10 words with
// 2-4 sub-targets, each under 10 words; an 11-word target is rejected once
// the retry budget runs out.
TEST(Acceptance, PlanWordBudgetsHoldAndLongTargetsAreRejected) {
  PromptLibrary prompts;
  DomainRegistry registry;
  const DomainSpec& spec = registry.get(DomainId::recommendation);

  RunConfig config;
  config.endpoints["synth"] = scripted("synth");
  config.roles.synthesizer = "synth";
  config.generation.n_candidates = 2;
  config.tree.max_depth = 1;
  config.workers = 1;
  std::vector<std::string> entries;
  for (int i = 0; i < 3; ++i) {
    std::string n = std::to_string(i);
    entries.push_back(env_reply("Background " + n + ".", "Trigger " + n + "."));
    entries.push_back(plan_reply("Offer a short plan " + n, {"say hello", "name one idea"}));
    entries.push_back(plan_reply("Offer a second plan " + n, {"check in", "float the idea"}));
    // a 9-word target sits just inside the budget
    entries.push_back(plan_reply("One two three four five six seven eight " + n,
                                 {"warm up first", "make the suggestion", "offer a follow up",
                                  "close the loop"}));
  }
  config.scripts["synth"] = script_of(entries);

  TempDir tmp;
  Orchestrator orch(config, tmp.path);
  auto outcome =
      orch.gen_cases({DomainId::recommendation}, 3, tmp.path / "dataset.jsonl", false);
  ASSERT_TRUE(outcome.complete());

  auto dataset = read_jsonl<EvalCase>(tmp.path / "dataset.jsonl");
  ASSERT_EQ(dataset.size(), 3u);
  for (const auto& c : dataset) {
    EXPECT_LT(util::split_words(c.reference_plan.target).size(), 10u) << c.case_id;
    EXPECT_GE(c.reference_plan.sub_targets.size(), 2u) << c.case_id;
    EXPECT_LE(c.reference_plan.sub_targets.size(), 4u) << c.case_id;
    for (const auto& s : c.reference_plan.sub_targets)
      EXPECT_LT(util::split_words(s).size(), 10u) << c.case_id;
  }

  const std::string eleven = "one two three four five six seven eight nine ten eleven";
  ASSERT_EQ(util::split_words(eleven).size(), 11u);
  EXPECT_THROW(validate_plan(TargetPlan{eleven, {"a b", "c d"}}), InvariantViolation);

  EnvironmentProfile env{"Background.", "Trigger."};
  std::vector<TargetPlan> candidates{{"Offer a short plan", {"say hello", "name one idea"}},
                                     {"Offer a second plan", {"check in", "float the idea"}}};
  // synthesis keeps producing the long target: one re-ask, then rejection
  Gateway gateway;
  ModelEndpoint ensembler = scripted("ens");
  gateway.set_script("ens", script_of({plan_reply(eleven, {"a b", "c d"}),
                                       plan_reply(eleven, {"a b", "c d"})}));
  EXPECT_THROW(ensemble_plans(gateway, ensembler, prompts, spec, {"recommendation", "music"}, env,
                              candidates),
               InvariantViolation);
  EXPECT_THROW(gateway.complete(ensembler, {user_message("any")}), ScriptExhausted);

  // candidate sampling gives up on a slot once its regen budget is spent
  Gateway gateway2;
  ModelEndpoint generator = scripted("gen");
  gateway2.set_script("gen", script_of({plan_reply(eleven, {"a b", "c d"})},
                                       ExhaustionPolicy::repeat_last));
  EXPECT_THROW(generate_candidate_plans(gateway2, generator, prompts, spec,
                                        {"recommendation", "music"}, env, 2),
               CandidateShortfall);
}

// Judge replies parse whether the JSON arrives fenced, wrapped in prose, or
// bare; non-whole or out-of-range scores fail with ScoreOutOfRange after
// exactly one re-ask.
TEST(Acceptance, JudgeScoreParsingIsStrictAboutRangeAndShape) {
  PromptLibrary prompts;
  DomainRegistry registry;
  const DomainSpec& spec = registry.get(DomainId::recommendation);
  ModelEndpoint judge = scripted("judge");
  EvalCase c = refinement_case();
  TargetPlan generated{"Recommend something", {"step one", "step two"}};

  Gateway gateway;
  gateway.set_script(
      "judge",
      script_of({"```json\n{\"reason\": \"solid match\", \"score\": 7}\n```",
                 "My assessment follows. {\"reason\": \"close enough\", \"score\": 5} Overall.",
                 R"({"reason": "clean", "score": 9})"}));
  EXPECT_EQ(judge_planning(gateway, judge, prompts, spec, c, generated).score, 7);
  EXPECT_EQ(judge_planning(gateway, judge, prompts, spec, c, generated).score, 5);
  EXPECT_EQ(judge_planning(gateway, judge, prompts, spec, c, generated).score, 9);

  for (const char* bad : {R"({"reason": "r", "score": 11})", R"({"reason": "r", "score": 0})",
                          R"({"reason": "r", "score": 7.5})", R"({"reason": "r", "score": "4.2"})"}) {
    Gateway g;
    g.set_script("judge", script_of({bad, bad}));
    EXPECT_THROW(judge_planning(g, judge, prompts, spec, c, generated), ScoreOutOfRange) << bad;
    // both entries consumed: the failure came after exactly one re-ask
    EXPECT_THROW(g.complete(judge, {user_message("any")}), ScriptExhausted) << bad;
  }
}

// Metric fixtures with independently computed expectations.
TEST(Acceptance, MetricFixturesMatchIndependentComputations) {
  // self-agreement is exact, including for a constant rater
  const std::vector<std::vector<int>> selves{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                             {4, 4, 4, 4},
                                             {1, 10, 5, 5, 2}};
  for (const auto& x : selves) {
    EXPECT_NEAR(weighted_kappa(x, x, KappaScheme::linear), 1.0, 1e-12);
    EXPECT_NEAR(weighted_kappa(x, x, KappaScheme::quadratic), 1.0, 1e-12);
  }

  const std::vector<int> a{1, 3, 5, 7};
  const std::vector<int> b{2, 3, 8, 7};
  EXPECT_NEAR(weighted_kappa(a, b, KappaScheme::quadratic),
              kappa_confusion_oracle(a, b, /*quadratic=*/true), 1e-9);
  EXPECT_NEAR(weighted_kappa(a, b, KappaScheme::quadratic), 0.8, 1e-12);
  EXPECT_NEAR(weighted_kappa(a, b, KappaScheme::linear),
              kappa_confusion_oracle(a, b, /*quadratic=*/false), 1e-9);

  // one case scored 5, 6, 7 across three runs
  StabilityReport stability = run_stability({{5.0}, {6.0}, {7.0}});
  ASSERT_EQ(stability.per_case.size(), 1u);
  EXPECT_NEAR(stability.mean, 0.8165, 1e-3);

  // 3 of 10 openers lean on the passive "sounds like" phrasing
  std::vector<std::string> openers{
      "Sounds like you had a long day.",  "Want to hear something new?",
      "How was the concert?",             "It sounds LIKE rain is coming.",
      "Shall we plan the weekend?",       "Any news from the fair?",
      "sounds like a good moment to chat", "Did the package arrive?",
      "What are you reading lately?",     "Ready for tomorrow?"};
  EXPECT_DOUBLE_EQ(passive_initiation_rate(openers), 0.300);

  // per-message mention counts 3, 1, 0
  Gateway gateway;
  ModelEndpoint annotator = scripted("ann");
  gateway.set_script("ann", script_of({json{{"count", 3}}.dump(), json{{"count", 1}}.dump(),
                                       json{{"count", 0}}.dump()}));
  DialogueTranscript transcript;
  transcript.case_id = "case";
  transcript.endpoint_id = "m";
  transcript.turns = {{1, "first", std::string("u1")},
                      {2, "second", std::string("u2")},
                      {3, "third", std::nullopt}};
  PromptLibrary prompts;
  DensityAnnotation density = annotate_density(gateway, annotator, prompts, transcript,
                                               {"s1", "s2", "s3", "s4"});
  EXPECT_NEAR(density.average_density, 1.333, 1e-3);
  ASSERT_TRUE(density.initiation_density.has_value());
  EXPECT_EQ(*density.initiation_density, 3);
}

// Tier and agreeableness facets are partitions: recombining their cells
// weight-by-count reproduces the unfaceted means bit for bit. The rendered
// table keeps the Avg. column plus one column per domain for each task.
TEST(Acceptance, FacetedReportsReaggregateToTheOverallMeans) {
  // counts stay powers of two so every mean is exact in binary
  const std::vector<DomainId> doms{DomainId::recommendation, DomainId::persuasion,
                                   DomainId::ambiguous_instruction, DomainId::glasses_assistant};
  std::vector<ScoreRecord> records;
  int z = 0;
  for (const char* endpoint : {"model-a", "model-b"})
    for (const char* task : {"planning", "guidance"})
      for (DomainId d : doms)
        for (Tier tier : {Tier::fair, Tier::hard})
          for (int k = 0; k < 2; ++k) {
            ScoreRecord r;
            r.endpoint_id = endpoint;
            r.task = task;
            r.domain = d;
            r.tier = tier;
            if (std::string(task) == "guidance")
              r.agreeableness = k == 0 ? Agreeableness::low : Agreeableness::high;
            r.score = 1 + (z++ * 37) % 10;
            records.push_back(r);
          }

  ReportTable table = build_report(records, ReportFacets{true, true});
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.tier_facets.size(), 2u);
  EXPECT_EQ(table.agreeableness_facets.size(), 2u);

  auto find_row = [](const std::vector<ReportRow>& rows, const std::string& endpoint,
                     const std::string& task) -> const ReportRow* {
    for (const auto& r : rows)
      if (r.endpoint_id == endpoint && r.task == task) return &r;
    return nullptr;
  };
  auto expect_recombines = [&](const std::map<std::string, std::vector<ReportRow>>& facets,
                               const ReportRow& row) {
    double sum = 0.0;
    int count = 0;
    std::map<DomainId, std::pair<double, int>> domain_sums;
    for (const auto& [name, rows] : facets) {
      const ReportRow* part = find_row(rows, row.endpoint_id, row.task);
      if (!part) continue;
      sum += part->overall.mean * part->overall.count;
      count += part->overall.count;
      for (const auto& [d, cell] : part->by_domain) {
        domain_sums[d].first += cell.mean * cell.count;
        domain_sums[d].second += cell.count;
      }
    }
    ASSERT_EQ(count, row.overall.count);
    EXPECT_DOUBLE_EQ(sum / count, row.overall.mean);
    ASSERT_EQ(domain_sums.size(), row.by_domain.size());
    for (const auto& [d, cell] : row.by_domain) {
      ASSERT_EQ(domain_sums[d].second, cell.count) << to_string(d);
      EXPECT_DOUBLE_EQ(domain_sums[d].first / domain_sums[d].second, cell.mean) << to_string(d);
    }
  };

  for (const auto& row : table.rows) {
    expect_recombines(table.tier_facets, row);
    if (row.task == "guidance") expect_recombines(table.agreeableness_facets, row);
  }

  std::string text = render_report(table);
  for (const std::string section : {"== planning ==", "== guidance =="}) {
    size_t pos = text.find(section);
    ASSERT_NE(pos, std::string::npos) << section;
    size_t start = text.find('\n', pos) + 1;
    std::string header = text.substr(start, text.find('\n', start) - start);
    for (const char* column : {"model", "Avg.", "Rec.", "Per.", "AI.", "LF.", "Sys.", "GAs."})
      EXPECT_NE(header.find(column), std::string::npos) << section << " header: " << header;
  }
  EXPECT_NE(text.find("-- tier: fair --"), std::string::npos);
  EXPECT_NE(text.find("-- agreeableness: low --"), std::string::npos);
}
