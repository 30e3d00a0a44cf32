#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proeval/config.hpp"
#include "proeval/errors.hpp"
#include "proeval/orchestrator.hpp"

namespace fs = std::filesystem;
using namespace proeval;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  bool resume = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_resume = true) {
  cmd->add_option("--config", args.config_path, "run configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the configured RNG seed");
  cmd->add_option("--workers", args.workers, "override the configured worker count");
  if (with_resume)
    cmd->add_flag("--resume", args.resume, "continue a previous run instead of starting over");
}

RunConfig load_with_overrides(const CommonArgs& args) {
  RunConfig config = load_config(fs::path{args.config_path});
  if (args.seed) config.rng_seed = *args.seed;
  if (args.workers) {
    if (*args.workers < 1) throw UsageError("--workers must be >= 1");
    config.workers = *args.workers;
  }
  return config;
}

fs::path config_base(const CommonArgs& args) {
  fs::path path{args.config_path};
  return path.has_parent_path() ? path.parent_path() : fs::path(".");
}

std::vector<DomainId> parse_domains(const std::vector<std::string>& names) {
  if (names.empty())
    return {kAllDomains.begin(), kAllDomains.end()};
  std::vector<DomainId> out;
  for (const auto& name : names) out.push_back(domain_from_string(name));
  return out;
}

int finish_stage(const char* stage, const StageOutcome& outcome) {
  std::printf("%s: %d done, %d failed, %d already complete\n", stage, outcome.done,
              outcome.failed, outcome.resumed);
  for (const auto& err : outcome.errors) std::fprintf(stderr, "  failed %s\n", err.c_str());
  return outcome.complete() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthesize and evaluate proactive-dialogue benchmarks"};
  app.require_subcommand(1);

  // gen-topics
  CommonArgs topics_args;
  std::vector<std::string> topics_domains;
  std::optional<int> depth_override, branching_override;
  auto* gen_topics = app.add_subcommand("gen-topics", "build or extend per-domain topic trees");
  add_common(gen_topics, topics_args, /*with_resume=*/false);
  gen_topics->add_option("--domain", topics_domains, "domain id (repeatable; default: all)");
  gen_topics->add_option("--depth", depth_override, "maximum tree depth");
  gen_topics->add_option("--branching", branching_override, "maximum children per node");

  // gen-cases
  CommonArgs cases_args;
  std::vector<std::string> cases_domains;
  int count = 2;
  std::string cases_out;
  auto* gen_cases = app.add_subcommand("gen-cases", "synthesize unrefined evaluation cases");
  add_common(gen_cases, cases_args);
  gen_cases->add_option("--domain", cases_domains, "domain id (repeatable; default: all)");
  gen_cases->add_option("--count", count, "cases per domain")->check(CLI::PositiveNumber);
  gen_cases->add_option("--out", cases_out, "output dataset path (default from config)");

  // refine
  CommonArgs refine_args;
  std::string refine_dataset, refine_out;
  auto* refine = app.add_subcommand("refine", "probe difficulty, rewrite, and validate cases");
  add_common(refine, refine_args);
  refine->add_option("--dataset", refine_dataset, "unrefined dataset (default from config)");
  refine->add_option("--out", refine_out, "refined dataset path (default from config)");

  // eval-plan
  CommonArgs plan_args;
  std::string plan_dataset, plan_out;
  std::vector<std::string> plan_models;
  auto* eval_plan = app.add_subcommand("eval-plan", "run the target-planning task");
  add_common(eval_plan, plan_args);
  eval_plan->add_option("--dataset", plan_dataset, "refined dataset (default from config)");
  eval_plan->add_option("--out", plan_out, "results path (default results/planning.jsonl)");
  eval_plan->add_option("--model", plan_models,
                        "evaluated endpoint id (repeatable; default: config bindings)");

  // eval-guide
  CommonArgs guide_args;
  std::string guide_dataset, guide_out, capture_path;
  std::vector<std::string> guide_models;
  std::vector<std::string> tier_names{"medium"};
  bool no_target = false;
  auto* eval_guide = app.add_subcommand("eval-guide", "run the dialogue-guidance task");
  add_common(eval_guide, guide_args);
  eval_guide->add_option("--dataset", guide_dataset, "refined dataset (default from config)");
  eval_guide->add_option("--out", guide_out, "results path (default results/guidance.jsonl)");
  eval_guide->add_option("--model", guide_models,
                         "evaluated endpoint id (repeatable; default: config bindings)");
  eval_guide->add_option("--tiers", tier_names, "agreeableness tiers: low,medium,high")
      ->delimiter(',');
  eval_guide->add_flag("--no-target", no_target,
                       "hide the reference target from the evaluated model");
  eval_guide->add_option("--capture-payloads", capture_path,
                         "record every payload sent to evaluated endpoints (JSONL)");

  // report
  CommonArgs report_args;
  std::string report_dataset, report_out;
  std::vector<std::string> planning_files, guidance_files;
  bool by_tier = false, by_agreeableness = false, with_density = false;
  auto* report = app.add_subcommand("report", "aggregate results into score tables");
  add_common(report, report_args, /*with_resume=*/false);
  report->add_option("--dataset", report_dataset, "refined dataset (default from config)");
  report->add_option("--planning", planning_files, "planning results file (repeatable)");
  report->add_option("--guidance", guidance_files, "guidance results file (repeatable)");
  report->add_option("--out", report_out, "output prefix (default results/report)");
  report->add_flag("--by-tier", by_tier, "add per-difficulty-tier breakdowns");
  report->add_flag("--by-agreeableness", by_agreeableness,
                   "add per-agreeableness breakdowns");
  report->add_flag("--with-density", with_density,
                   "annotate transcripts for sub-target density (calls the annotator)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_topics->parsed()) {
      RunConfig config = load_with_overrides(topics_args);
      if (depth_override) config.tree.max_depth = *depth_override;
      if (branching_override) config.tree.branching = *branching_override;
      Orchestrator orch(std::move(config), config_base(topics_args));
      auto outcome = orch.gen_topics(parse_domains(topics_domains));
      std::printf("gen-topics: %d built, %d extended, %d already saturated\n", outcome.built,
                  outcome.extended, outcome.skipped);
      return 0;
    }

    if (gen_cases->parsed()) {
      Orchestrator orch(load_with_overrides(cases_args), config_base(cases_args));
      fs::path out = cases_out.empty() ? orch.resolve(orch.config().paths.dataset)
                                       : fs::path(cases_out);
      auto outcome =
          orch.gen_cases(parse_domains(cases_domains), count, out, cases_args.resume);
      return finish_stage("gen-cases", outcome);
    }

    if (refine->parsed()) {
      Orchestrator orch(load_with_overrides(refine_args), config_base(refine_args));
      fs::path dataset = refine_dataset.empty() ? orch.resolve(orch.config().paths.dataset)
                                                : fs::path(refine_dataset);
      fs::path out = refine_out.empty() ? orch.resolve(orch.config().paths.refined)
                                        : fs::path(refine_out);
      auto outcome = orch.refine(dataset, out, refine_args.resume);
      return finish_stage("refine", outcome);
    }

    if (eval_plan->parsed()) {
      RunConfig config = load_with_overrides(plan_args);
      // --model narrows the run to a subset of the configured endpoints.
      if (!plan_models.empty()) config.roles.evaluated = plan_models;
      Orchestrator orch(std::move(config), config_base(plan_args));
      fs::path dataset = plan_dataset.empty() ? orch.resolve(orch.config().paths.refined)
                                              : fs::path(plan_dataset);
      fs::path out = plan_out.empty()
                         ? orch.resolve(orch.config().paths.results_dir) / "planning.jsonl"
                         : fs::path(plan_out);
      auto outcome = orch.eval_plan(dataset, out, plan_args.resume);
      return finish_stage("eval-plan", outcome);
    }

    if (eval_guide->parsed()) {
      RunConfig config = load_with_overrides(guide_args);
      if (!guide_models.empty()) config.roles.evaluated = guide_models;
      Orchestrator orch(std::move(config), config_base(guide_args));
      std::vector<Agreeableness> tiers;
      for (const auto& name : tier_names) tiers.push_back(agreeableness_from_string(name));
      fs::path dataset = guide_dataset.empty() ? orch.resolve(orch.config().paths.refined)
                                               : fs::path(guide_dataset);
      fs::path out = guide_out.empty()
                         ? orch.resolve(orch.config().paths.results_dir) / "guidance.jsonl"
                         : fs::path(guide_out);
      auto outcome = orch.eval_guide(dataset, out, tiers, no_target, guide_args.resume,
                                     capture_path.empty() ? fs::path() : fs::path(capture_path));
      return finish_stage("eval-guide", outcome);
    }

    if (report->parsed()) {
      Orchestrator orch(load_with_overrides(report_args), config_base(report_args));
      fs::path dataset = report_dataset.empty() ? orch.resolve(orch.config().paths.refined)
                                                : fs::path(report_dataset);
      fs::path results_dir = orch.resolve(orch.config().paths.results_dir);
      std::vector<fs::path> planning, guidance;
      for (const auto& f : planning_files) planning.emplace_back(f);
      for (const auto& f : guidance_files) guidance.emplace_back(f);
      if (planning.empty() && fs::exists(results_dir / "planning.jsonl"))
        planning.push_back(results_dir / "planning.jsonl");
      if (guidance.empty() && fs::exists(results_dir / "guidance.jsonl"))
        guidance.push_back(results_dir / "guidance.jsonl");
      fs::path out = report_out.empty() ? results_dir / "report" : fs::path(report_out);
      ReportFacets facets{by_tier, by_agreeableness};
      orch.report(dataset, planning, guidance, out, facets, with_density);
      std::printf("report: wrote %s.json and %s.txt\n", out.string().c_str(),
                  out.string().c_str());
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
