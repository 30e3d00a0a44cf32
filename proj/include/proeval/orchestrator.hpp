#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/config.hpp"
#include "proeval/domains.hpp"
#include "proeval/envgen.hpp"
#include "proeval/errors.hpp"
#include "proeval/eval_guidance.hpp"
#include "proeval/eval_planning.hpp"
#include "proeval/gateway.hpp"
#include "proeval/jsonl.hpp"
#include "proeval/manifest.hpp"
#include "proeval/metrics.hpp"
#include "proeval/prompts.hpp"
#include "proeval/refinement.hpp"
#include "proeval/topic_tree.hpp"
#include "proeval/util.hpp"

namespace proeval {

struct StageOutcome {
  int done = 0;
  int failed = 0;
  int resumed = 0;  // finished in an earlier invocation
  std::vector<std::string> errors;
  bool complete() const { return failed == 0; }
};

/// Wires a loaded config into live collaborators (gateway with cache and
/// scripts, prompt library, domain registry) and exposes the pipeline
/// stages the CLI surfaces. Relative paths resolve against the directory
/// of the config file.
class Orchestrator {
 public:
  Orchestrator(RunConfig config, std::filesystem::path base_dir)
      : config_(std::move(config)),
        base_(std::move(base_dir)),
        prompts_(config_.paths.prompts_dir.empty()
                     ? PromptLibrary()
                     : PromptLibrary(resolve(config_.paths.prompts_dir))),
        domains_(config_.paths.fixtures_dir.empty()
                     ? DomainRegistry()
                     : DomainRegistry(resolve(config_.paths.fixtures_dir))) {
    std::filesystem::create_directories(resolve(config_.paths.cache_dir));
    gateway_.set_cache_dir(resolve(config_.paths.cache_dir));
    for (const auto& [id, script] : config_.scripts) gateway_.set_script(id, script);
  }

  const RunConfig& config() const { return config_; }
  Gateway& gateway() { return gateway_; }
  const PromptLibrary& prompts() const { return prompts_; }
  const DomainRegistry& domains() const { return domains_; }

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path path{p};
    return path.is_absolute() ? path : base_ / path;
  }

  std::filesystem::path tree_path(DomainId d) const {
    return resolve(config_.paths.trees_dir) / (std::string(to_string(d)) + ".json");
  }

  // ---- gen-topics ----------------------------------------------------

  struct TopicsOutcome {
    int built = 0;
    int extended = 0;
    int skipped = 0;  // already saturated
  };

  TopicsOutcome gen_topics(const std::vector<DomainId>& which) {
    std::filesystem::create_directories(resolve(config_.paths.trees_dir));
    const ModelEndpoint& generator =
        endpoint_for(config_, config_.roles.synthesizer, "synthesizer");
    TopicsOutcome outcome;
    for (DomainId d : which) {
      const auto path = tree_path(d);
      if (std::filesystem::exists(path)) {
        TopicTree tree = import_tree(path);
        if (tree_saturated(tree)) {
          ++outcome.skipped;
          continue;
        }
        grow_missing(gateway_, generator, prompts_, tree, config_.workers);
        export_tree(tree, path);
        ++outcome.extended;
      } else {
        TopicTree tree =
            grow_tree(gateway_, generator, prompts_, d, domains_.get(d).seed_topics,
                      config_.tree.max_depth, config_.tree.branching, config_.workers);
        export_tree(tree, path);
        ++outcome.built;
      }
    }
    return outcome;
  }

  // ---- gen-cases -----------------------------------------------------

  StageOutcome gen_cases(const std::vector<DomainId>& which, int count_per_domain,
                         const std::filesystem::path& out, bool resume) {
    if (count_per_domain < 1) throw UsageError("case count must be >= 1");
    // Build any missing topic trees first so one command can run the whole
    // synthesis stage from scratch.
    std::vector<DomainId> missing;
    for (DomainId d : which)
      if (!std::filesystem::exists(tree_path(d))) missing.push_back(d);
    if (!missing.empty()) gen_topics(missing);

    std::map<DomainId, TopicTree> trees;
    for (DomainId d : which) trees.emplace(d, import_tree(tree_path(d)));

    struct Job {
      std::string case_id;
      DomainId domain = DomainId::recommendation;
      uint64_t seed = 0;
    };
    std::vector<Job> jobs;
    for (DomainId d : which) {
      uint64_t domain_seed = util::mix_seed(config_.rng_seed, to_string(d));
      for (int i = 0; i < count_per_domain; ++i) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s-%08x-%03d", std::string(to_string(d)).c_str(),
                      static_cast<unsigned>(domain_seed & 0xffffffffu), i);
        jobs.push_back({buf, d, util::mix_seed(domain_seed, static_cast<uint64_t>(i))});
      }
    }

    const ModelEndpoint& synthesizer =
        endpoint_for(config_, config_.roles.synthesizer, "synthesizer");
    std::vector<std::string> keys;
    for (const auto& j : jobs) keys.push_back(j.case_id);
    return run_keyed_stage<EvalCase>("gen-cases", out, keys, resume, [&](size_t i) {
          const Job& job = jobs[i];
          const DomainSpec& spec = domains_.get(job.domain);
          const TopicTree& tree = trees.at(job.domain);
          EvalCase c;
          c.case_id = job.case_id;
          c.domain = job.domain;
          c.seed = job.seed;
          c.topic_path = sample_leaf_path(tree, job.seed);
          c.environment = generate_environment(gateway_, synthesizer, prompts_, spec,
                                               c.topic_path, job.case_id + "|env");
          auto candidates = generate_candidate_plans(
              gateway_, synthesizer, prompts_, spec, c.topic_path, c.environment,
              config_.generation.n_candidates, config_.generation.high_temperature,
              job.case_id + "|plan");
          auto outcome = ensemble_plans(gateway_, synthesizer, prompts_, spec, c.topic_path,
                                        c.environment, candidates, job.case_id + "|ens");
          c.reference_plan = outcome.plan;
          return std::optional<EvalCase>(std::move(c));
        });
  }

  // ---- refine ----------------------------------------------------------

  StageOutcome refine(const std::filesystem::path& dataset, const std::filesystem::path& out,
                      bool resume) {
    auto cases = read_jsonl<EvalCase>(dataset);
    DifficultyProbe probe;
    for (const auto& id : config_.roles.probes)
      probe.probe_endpoints.push_back(endpoint_for(config_, id, "probes"));
    probe.similarity_judge = endpoint_for(config_, config_.roles.judge, "judge");
    validate_probe(probe);
    std::vector<ModelEndpoint> validators;
    for (const auto& id : config_.roles.validators)
      validators.push_back(endpoint_for(config_, id, "validators"));
    const ModelEndpoint& rewriter =
        endpoint_for(config_, config_.roles.synthesizer, "synthesizer");

    std::vector<std::string> keys;
    for (const auto& c : cases) keys.push_back(c.case_id);
    return run_keyed_stage<EvalCase>(
        "refine", out, keys, resume, [&](size_t i) -> std::optional<EvalCase> {
          const DomainSpec& spec = domains_.get(cases[i].domain);
          EvalCase refined =
              refine_case(gateway_, probe, rewriter, prompts_, spec, cases[i],
                          config_.generation.max_refine_rounds);
          if (refined.tier == Tier::discarded) return std::nullopt;  // dropped from the dataset
          if (!final_check(gateway_, validators, prompts_, spec, refined)) return std::nullopt;
          return refined;
        });
  }

  // ---- eval-plan ---------------------------------------------------------

  StageOutcome eval_plan(const std::filesystem::path& dataset,
                         const std::filesystem::path& out, bool resume) {
    auto cases = read_jsonl<EvalCase>(dataset);
    const ModelEndpoint& judge = endpoint_for(config_, config_.roles.judge, "judge");
    const std::string run_id = make_run_id("eval-plan", config_, config_.rng_seed);

    struct Job {
      size_t case_index;
      std::string endpoint_id;
    };
    std::vector<Job> jobs;
    std::vector<std::string> keys;
    for (const auto& endpoint_id : config_.roles.evaluated)
      for (size_t i = 0; i < cases.size(); ++i) {
        jobs.push_back({i, endpoint_id});
        keys.push_back(cases[i].case_id + "|" + endpoint_id);
      }
    if (jobs.empty()) throw UsageError("config binds no evaluated endpoints");

    return run_keyed_stage<PlanningResult>("eval-plan", out, keys, resume, [&](size_t k) {
      const Job& job = jobs[k];
      const EvalCase& c = cases[job.case_index];
      const ModelEndpoint& evaluated = endpoint_for(config_, job.endpoint_id, "evaluated");
      return std::optional<PlanningResult>(evaluate_planning_case(
          gateway_, evaluated, judge, prompts_, domains_.get(c.domain), c, run_id));
    });
  }

  // ---- eval-guide ----------------------------------------------------------

  StageOutcome eval_guide(const std::filesystem::path& dataset, const std::filesystem::path& out,
                          const std::vector<Agreeableness>& tiers, bool no_target, bool resume,
                          const std::filesystem::path& capture_path = {}) {
    if (tiers.empty()) throw UsageError("at least one agreeableness tier required");
    auto cases = read_jsonl<EvalCase>(dataset);
    const ModelEndpoint& user_sim = endpoint_for(config_, config_.roles.user_sim, "user_sim");
    const ModelEndpoint& checker = endpoint_for(config_, config_.roles.checker, "checker");
    const ModelEndpoint& judge = endpoint_for(config_, config_.roles.judge, "judge");
    const std::string run_id = make_run_id("eval-guide", config_, config_.rng_seed);

    struct Job {
      size_t case_index;
      std::string endpoint_id;
      Agreeableness level;
    };
    std::vector<Job> jobs;
    std::vector<std::string> keys;
    for (const auto& endpoint_id : config_.roles.evaluated)
      for (size_t i = 0; i < cases.size(); ++i)
        for (Agreeableness level : tiers) {
          jobs.push_back({i, endpoint_id, level});
          keys.push_back(cases[i].case_id + "|" + endpoint_id + "|" +
                         std::string(to_string(level)));
        }
    if (jobs.empty()) throw UsageError("config binds no evaluated endpoints");

    std::unique_ptr<PayloadCapture> capture;
    if (!capture_path.empty()) {
      capture = std::make_unique<PayloadCapture>(capture_path, config_.roles.evaluated);
      gateway_.set_request_observer(capture->observer());
    }
    StageOutcome outcome = run_keyed_stage<GuidanceResult>(
        "eval-guide", out, keys, resume, [&](size_t k) {
          const Job& job = jobs[k];
          const EvalCase& c = cases[job.case_index];
          const ModelEndpoint& evaluated = endpoint_for(config_, job.endpoint_id, "evaluated");
          GuidanceConfig gc = config_.guidance;
          gc.agreeableness = job.level;
          gc.target_visible = !no_target;
          return std::optional<GuidanceResult>(evaluate_guidance_case(
              gateway_, evaluated, user_sim, checker, judge, prompts_, c, gc, run_id));
        });
    if (capture) gateway_.set_request_observer(nullptr);
    return outcome;
  }

  // ---- report ------------------------------------------------------------

  struct ReportExtras {
    std::map<std::string, double> passive_initiation;          // endpoint -> rate
    std::map<std::string, double> mean_average_density;        // endpoint -> mean density
    std::map<std::string, double> mean_initiation_density;     // endpoint -> mean first-msg count
    int density_missing = 0;  // messages whose annotation failed
  };

  void report(const std::filesystem::path& dataset,
              const std::vector<std::filesystem::path>& planning_files,
              const std::vector<std::filesystem::path>& guidance_files,
              const std::filesystem::path& out_prefix, const ReportFacets& facets,
              bool with_density) {
    std::map<std::string, EvalCase> cases;
    for (const auto& c : read_jsonl<EvalCase>(dataset)) cases[c.case_id] = c;

    std::vector<PlanningResult> planning;
    for (const auto& f : planning_files)
      for (auto& r : read_jsonl<PlanningResult>(f)) planning.push_back(std::move(r));
    std::vector<GuidanceResult> guidance;
    for (const auto& f : guidance_files)
      for (auto& r : read_jsonl<GuidanceResult>(f)) guidance.push_back(std::move(r));

    std::vector<ScoreRecord> records = planning_records(planning, cases);
    for (auto& r : guidance_records(guidance, cases)) records.push_back(std::move(r));
    ReportTable table = build_report(records, facets);

    ReportExtras extras = compute_extras(guidance, cases, with_density);

    nlohmann::json summary = table;
    summary["passive_initiation"] = extras.passive_initiation;
    if (with_density) {
      summary["density"] = {{"mean_average_density", extras.mean_average_density},
                            {"mean_initiation_density", extras.mean_initiation_density},
                            {"missing_annotations", extras.density_missing}};
    }
    util::write_file_atomic(std::filesystem::path(out_prefix.string() + ".json"),
                            summary.dump(2) + "\n");

    std::string text = render_report(table);
    if (!extras.passive_initiation.empty()) {
      text += "passive initiation rate (\"sounds like\" openers)\n";
      for (const auto& [endpoint, rate] : extras.passive_initiation) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", rate);
        text += "  " + endpoint + ": " + buf + "\n";
      }
    }
    if (with_density) {
      text += "target density (mean per assistant message / first message)\n";
      for (const auto& [endpoint, avg] : extras.mean_average_density) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f / %.3f", avg,
                      extras.mean_initiation_density.count(endpoint)
                          ? extras.mean_initiation_density.at(endpoint)
                          : 0.0);
        text += "  " + endpoint + ": " + buf + "\n";
      }
    }
    util::write_file_atomic(std::filesystem::path(out_prefix.string() + ".txt"), text);
  }

 private:
  class PayloadCapture {
   public:
    PayloadCapture(std::filesystem::path path, const std::vector<std::string>& endpoint_ids)
        : path_(std::move(path)), ids_(endpoint_ids.begin(), endpoint_ids.end()) {
      if (std::filesystem::exists(path_)) std::filesystem::remove(path_);
      if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    }

    Gateway::RequestObserver observer() {
      return [this](const ModelEndpoint& endpoint, const std::vector<ChatMessage>& messages) {
        if (!ids_.count(endpoint.id)) return;
        nlohmann::json j = {{"endpoint_id", endpoint.id}, {"messages", messages}};
        std::lock_guard<std::mutex> lock(mu_);
        append_jsonl(path_, j);
      };
    }

   private:
    std::filesystem::path path_;
    std::set<std::string> ids_;
    std::mutex mu_;
  };

  ReportExtras compute_extras(const std::vector<GuidanceResult>& guidance,
                              const std::map<std::string, EvalCase>& cases, bool with_density) {
    ReportExtras extras;
    std::map<std::string, std::vector<std::string>> first_messages;
    for (const auto& r : guidance)
      if (!r.transcript.turns.empty())
        first_messages[r.endpoint_id].push_back(r.transcript.turns.front().assistant_message);
    for (const auto& [endpoint, messages] : first_messages)
      extras.passive_initiation[endpoint] = passive_initiation_rate(messages);

    if (with_density) {
      const ModelEndpoint& annotator =
          endpoint_for(config_, config_.roles.annotator, "annotator");
      std::map<std::string, std::pair<double, int>> avg_acc;
      std::map<std::string, std::pair<double, int>> init_acc;
      for (const auto& r : guidance) {
        auto it = cases.find(r.case_id);
        if (it == cases.end()) throw Error("guidance result references unknown case " + r.case_id);
        DensityAnnotation annotation = annotate_density(
            gateway_, annotator, prompts_, r.transcript, it->second.reference_plan.sub_targets,
            r.case_id + "|density|" + r.endpoint_id + "|" +
                std::string(to_string(r.transcript.config.agreeableness)));
        for (const auto& c : annotation.per_message_counts)
          if (!c) ++extras.density_missing;
        auto& avg = avg_acc[r.endpoint_id];
        avg.first += annotation.average_density;
        avg.second += 1;
        if (annotation.initiation_density) {
          auto& init = init_acc[r.endpoint_id];
          init.first += *annotation.initiation_density;
          init.second += 1;
        }
      }
      for (const auto& [endpoint, acc] : avg_acc)
        extras.mean_average_density[endpoint] = acc.second ? acc.first / acc.second : 0.0;
      for (const auto& [endpoint, acc] : init_acc)
        extras.mean_initiation_density[endpoint] = acc.second ? acc.first / acc.second : 0.0;
    }
    return extras;
  }

  /// Shared stage skeleton: keyed jobs, append-only progress log, manifest
  /// tracking, resume, and a deterministic (key-sorted) final output file
  /// written only once every key is done. Returning nullopt from `work`
  /// marks the key done without contributing an output line (e.g. cases
  /// discarded during refinement).
  template <typename Payload>
  StageOutcome run_keyed_stage(
      const std::string& stage, const std::filesystem::path& final_path,
      const std::vector<std::string>& keys, bool resume,
      const std::function<std::optional<Payload>(size_t)>& work) {
    if (final_path.has_parent_path()) std::filesystem::create_directories(final_path.parent_path());
    const std::filesystem::path progress_path{final_path.string() + ".progress.jsonl"};
    const std::filesystem::path manifest_path{final_path.string() + ".manifest.json"};
    const std::string run_id = make_run_id(stage, config_, config_.rng_seed);

    RunManifest manifest = make_manifest(run_id, config_hash(config_), stage);
    std::map<std::string, std::optional<Payload>> completed;
    StageOutcome outcome;

    if (resume && std::filesystem::exists(manifest_path)) {
      RunManifest previous = load_manifest(manifest_path);
      if (previous.run_id != run_id)
        throw ConfigError("cannot resume: manifest belongs to run " + previous.run_id +
                          " but this config/seed yields " + run_id);
      manifest = std::move(previous);
      if (std::filesystem::exists(progress_path)) {
        for (const auto& line : read_jsonl<nlohmann::json>(progress_path)) {
          if (line.value("status", "") != "done") continue;
          const std::string key = line.at("key").get<std::string>();
          if (line.contains("payload") && !line.at("payload").is_null())
            completed[key] = line.at("payload").get<Payload>();
          else
            completed[key] = std::nullopt;
        }
      }
      outcome.resumed = static_cast<int>(completed.size());
    } else {
      std::filesystem::remove(progress_path);
      std::filesystem::remove(manifest_path);
      std::filesystem::remove(final_path);
    }

    for (const auto& key : keys)
      if (!manifest.is_done(key)) manifest.mark(key, CaseStatus::pending);
    save_manifest(manifest, manifest_path);

    std::vector<size_t> pending;
    for (size_t i = 0; i < keys.size(); ++i)
      if (!completed.count(keys[i])) pending.push_back(i);

    std::mutex mu;
    util::parallel_for_each(pending, config_.workers, [&](size_t i) {
      const std::string& key = keys[i];
      try {
        std::optional<Payload> payload = work(i);
        std::lock_guard<std::mutex> lock(mu);
        nlohmann::json line = {{"key", key}, {"status", "done"}};
        line["payload"] = payload ? nlohmann::json(*payload) : nlohmann::json(nullptr);
        append_jsonl(progress_path, line);
        manifest.mark(key, CaseStatus::done);
        save_manifest(manifest, manifest_path);
        completed[key] = std::move(payload);
        ++outcome.done;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        nlohmann::json line = {{"key", key}, {"status", "failed"}, {"error", e.what()}};
        append_jsonl(progress_path, line);
        manifest.mark(key, CaseStatus::failed);
        save_manifest(manifest, manifest_path);
        outcome.errors.push_back(key + ": " + e.what());
        ++outcome.failed;
      }
    });

    if (manifest.all_done()) {
      std::vector<Payload> lines;
      for (const auto& [key, payload] : completed)  // map order: sorted by key
        if (payload) lines.push_back(*payload);
      write_jsonl(final_path, lines);
    }
    return outcome;
  }

  RunConfig config_;
  std::filesystem::path base_;
  Gateway gateway_;
  PromptLibrary prompts_;
  DomainRegistry domains_;
};

}  // namespace proeval
