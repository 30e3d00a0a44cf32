#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/domains.hpp"
#include "proeval/errors.hpp"
#include "proeval/eval_guidance.hpp"
#include "proeval/eval_planning.hpp"
#include "proeval/gateway.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/prompts.hpp"
#include "proeval/util.hpp"

namespace proeval {

/// Per-dialogue annotation of how many sub-targets each assistant message
/// carries. A message whose annotation failed stays missing and is excluded
/// from the average rather than imputed.
struct DensityAnnotation {
  std::string case_id;
  std::string endpoint_id;
  std::vector<std::optional<int>> per_message_counts;
  double average_density = 0.0;        // mean over present counts
  std::optional<int> initiation_density;  // count of the first message
};

inline void to_json(nlohmann::json& j, const DensityAnnotation& d) {
  j = {{"case_id", d.case_id},
       {"endpoint_id", d.endpoint_id},
       {"average_density", d.average_density},
       {"per_message_counts", nlohmann::json::array()}};
  for (const auto& c : d.per_message_counts)
    j["per_message_counts"].push_back(c ? nlohmann::json(*c) : nlohmann::json(nullptr));
  j["initiation_density"] =
      d.initiation_density ? nlohmann::json(*d.initiation_density) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, DensityAnnotation& d) {
  j.at("case_id").get_to(d.case_id);
  j.at("endpoint_id").get_to(d.endpoint_id);
  j.at("average_density").get_to(d.average_density);
  d.per_message_counts.clear();
  for (const auto& c : j.at("per_message_counts"))
    d.per_message_counts.push_back(c.is_null() ? std::optional<int>()
                                               : std::optional<int>(c.get<int>()));
  d.initiation_density = j.at("initiation_density").is_null()
                             ? std::optional<int>()
                             : std::optional<int>(j.at("initiation_density").get<int>());
}

/// Recomputes the derived fields from the raw per-message counts.
inline void finalize_density(DensityAnnotation& d) {
  double sum = 0.0;
  int present = 0;
  for (const auto& c : d.per_message_counts)
    if (c) {
      sum += *c;
      ++present;
    }
  d.average_density = present > 0 ? sum / present : 0.0;
  d.initiation_density =
      !d.per_message_counts.empty() ? d.per_message_counts.front() : std::optional<int>();
}

/// Counts sub-target mentions in every assistant message of a transcript,
/// one annotator call per message. Counts clamp into [0, |sub_targets|].
inline DensityAnnotation annotate_density(Gateway& gateway, const ModelEndpoint& annotator,
                                          const PromptLibrary& prompts,
                                          const DialogueTranscript& transcript,
                                          const std::vector<std::string>& sub_targets,
                                          const std::string& cache_salt = "", int workers = 1) {
  if (transcript.turns.empty()) throw Error("cannot annotate an empty transcript");
  DensityAnnotation annotation;
  annotation.case_id = transcript.case_id;
  annotation.endpoint_id = transcript.endpoint_id;
  annotation.per_message_counts.assign(transcript.turns.size(), std::nullopt);

  const std::string sub_targets_json = nlohmann::json(sub_targets).dump();
  const int cap = static_cast<int>(sub_targets.size());
  const std::string salt_base = cache_salt.empty()
                                    ? transcript.case_id + "|" + transcript.endpoint_id
                                    : cache_salt;

  auto parse = [cap](const std::string& content) -> int {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("count") || !obj["count"].is_number())
      throw MalformedJson("density reply lacks a numeric 'count'");
    int count = obj["count"].get<int>();
    return std::clamp(count, 0, cap);
  };

  std::vector<size_t> indices(transcript.turns.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  util::parallel_for_each(indices, workers, [&](size_t i) {
    std::string prompt = prompts.fill(
        "density_count",
        {{"sub_targets", sub_targets_json}, {"message", transcript.turns[i].assistant_message}});
    std::vector<ChatMessage> messages{user_message(prompt)};
    CompleteOptions options;
    options.cache_salt = salt_base + "|msg" + std::to_string(i);
    std::string content = gateway.complete(annotator, messages, options).content;
    try {
      annotation.per_message_counts[i] = parse(content);
      return;
    } catch (const NoJsonFound&) {
    } catch (const MalformedJson&) {
    }
    options.cache_salt = salt_base + "|msg" + std::to_string(i) + "|reask1";
    content = gateway.complete(annotator, messages, options).content;
    try {
      annotation.per_message_counts[i] = parse(content);
    } catch (const NoJsonFound&) {  // stays missing, excluded from the average
    } catch (const MalformedJson&) {
    }
  });
  finalize_density(annotation);
  return annotation;
}

/// Fraction of first assistant messages that fall back on the passive
/// "sounds like..." opener.
inline double passive_initiation_rate(const std::vector<std::string>& first_messages) {
  if (first_messages.empty()) throw EmptyInput("passive_initiation_rate over zero messages");
  int hits = 0;
  for (const auto& m : first_messages)
    if (util::contains_ci(m, "sounds like")) ++hits;
  return static_cast<double>(hits) / static_cast<double>(first_messages.size());
}

enum class KappaScheme { linear, quadratic };

/// Inter-rater agreement over 1-10 scores with linear or quadratic
/// disagreement weights.
inline double weighted_kappa(const std::vector<int>& ratings_a, const std::vector<int>& ratings_b,
                             KappaScheme scheme = KappaScheme::quadratic) {
  if (ratings_a.size() != ratings_b.size() || ratings_a.empty())
    throw LengthMismatch("rating vectors must have equal non-zero length");
  constexpr int kCategories = 10;
  auto check = [](int r) {
    if (r < 1 || r > kCategories)
      throw ScoreOutOfRange("rating " + std::to_string(r) + " outside [1,10]");
  };
  std::array<std::array<double, kCategories>, kCategories> observed{};
  std::array<double, kCategories> row{};
  std::array<double, kCategories> col{};
  const double n = static_cast<double>(ratings_a.size());
  for (size_t k = 0; k < ratings_a.size(); ++k) {
    check(ratings_a[k]);
    check(ratings_b[k]);
    observed[ratings_a[k] - 1][ratings_b[k] - 1] += 1.0 / n;
  }
  for (int i = 0; i < kCategories; ++i)
    for (int j = 0; j < kCategories; ++j) {
      row[i] += observed[i][j];
      col[j] += observed[i][j];
    }
  double weighted_observed = 0.0;
  double weighted_expected = 0.0;
  for (int i = 0; i < kCategories; ++i)
    for (int j = 0; j < kCategories; ++j) {
      double w = scheme == KappaScheme::linear ? std::abs(i - j)
                                               : static_cast<double>((i - j) * (i - j));
      weighted_observed += w * observed[i][j];
      weighted_expected += w * row[i] * col[j];
    }
  if (weighted_expected == 0.0) {
    if (ratings_a == ratings_b) return 1.0;  // constant identical raters: full agreement
    throw DegenerateMarginals("no expected disagreement but ratings differ");
  }
  return 1.0 - weighted_observed / weighted_expected;
}

struct StabilityReport {
  std::vector<double> per_case;  // population std-dev of each case across runs
  double mean = 0.0;
};

/// Score stability across repeated runs: per-case population standard
/// deviation, then the mean over cases.
inline StabilityReport run_stability(const std::vector<std::vector<double>>& scores_by_run) {
  if (scores_by_run.size() < 2) throw EmptyInput("stability needs at least 2 runs");
  const size_t cases = scores_by_run.front().size();
  if (cases == 0) throw EmptyInput("stability needs at least 1 case");
  for (const auto& run : scores_by_run)
    if (run.size() != cases)
      throw LengthMismatch("runs score different case counts (" + std::to_string(run.size()) +
                           " vs " + std::to_string(cases) + ")");
  StabilityReport report;
  report.per_case.reserve(cases);
  double total = 0.0;
  for (size_t j = 0; j < cases; ++j) {
    double mean = 0.0;
    for (const auto& run : scores_by_run) mean += run[j];
    mean /= static_cast<double>(scores_by_run.size());
    double variance = 0.0;
    for (const auto& run : scores_by_run) variance += (run[j] - mean) * (run[j] - mean);
    variance /= static_cast<double>(scores_by_run.size());
    double sigma = std::sqrt(variance);
    report.per_case.push_back(sigma);
    total += sigma;
  }
  report.mean = total / static_cast<double>(cases);
  return report;
}

/// One scored outcome, the atom of report aggregation.
struct ScoreRecord {
  std::string endpoint_id;
  std::string task;  // "planning" | "guidance"
  DomainId domain = DomainId::recommendation;
  std::optional<Tier> tier;
  std::optional<Agreeableness> agreeableness;
  double score = 0.0;
};

struct ReportCell {
  double mean = 0.0;
  int count = 0;
};

struct ReportRow {
  std::string endpoint_id;
  std::string task;
  ReportCell overall;
  std::map<DomainId, ReportCell> by_domain;
};

struct ReportTable {
  std::vector<ReportRow> rows;  // sorted by (endpoint_id, task)
  std::map<std::string, std::vector<ReportRow>> tier_facets;
  std::map<std::string, std::vector<ReportRow>> agreeableness_facets;
};

struct ReportFacets {
  bool by_tier = false;
  bool by_agreeableness = false;
};

namespace detail {

inline std::vector<ReportRow> aggregate_rows(const std::vector<ScoreRecord>& records) {
  struct Accumulator {
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::pair<std::string, std::string>, std::map<std::optional<DomainId>, Accumulator>>
      cells;
  for (const auto& r : records) {
    auto& row = cells[{r.endpoint_id, r.task}];
    auto bump = [&](std::optional<DomainId> key) {
      auto& acc = row[key];
      acc.sum += r.score;
      acc.count += 1;
    };
    bump(std::nullopt);  // overall column
    bump(r.domain);
  }
  std::vector<ReportRow> rows;
  for (const auto& [key, by_domain] : cells) {
    ReportRow row;
    row.endpoint_id = key.first;
    row.task = key.second;
    for (const auto& [domain, acc] : by_domain) {
      ReportCell cell{acc.sum / acc.count, acc.count};
      if (domain)
        row.by_domain[*domain] = cell;
      else
        row.overall = cell;
    }
    rows.push_back(std::move(row));
  }
  return rows;  // std::map iteration already sorted by (endpoint_id, task)
}

}  // namespace detail

/// Deterministic mean table over score records, optionally faceted.
inline ReportTable build_report(const std::vector<ScoreRecord>& records,
                                const ReportFacets& facets = {}) {
  ReportTable table;
  table.rows = detail::aggregate_rows(records);
  if (facets.by_tier) {
    std::map<std::string, std::vector<ScoreRecord>> split;
    for (const auto& r : records)
      if (r.tier) split[std::string(to_string(*r.tier))].push_back(r);
    for (const auto& [tier, subset] : split)
      table.tier_facets[tier] = detail::aggregate_rows(subset);
  }
  if (facets.by_agreeableness) {
    std::map<std::string, std::vector<ScoreRecord>> split;
    for (const auto& r : records)
      if (r.agreeableness) split[std::string(to_string(*r.agreeableness))].push_back(r);
    for (const auto& [level, subset] : split)
      table.agreeableness_facets[level] = detail::aggregate_rows(subset);
  }
  return table;
}

inline void to_json(nlohmann::json& j, const ReportCell& c) {
  j = {{"mean", c.mean}, {"count", c.count}};
}

inline void to_json(nlohmann::json& j, const ReportRow& r) {
  j = {{"endpoint_id", r.endpoint_id},
       {"task", r.task},
       {"overall", r.overall},
       {"domains", nlohmann::json::object()}};
  for (const auto& [domain, cell] : r.by_domain)
    j["domains"][std::string(to_string(domain))] = cell;
}

inline void to_json(nlohmann::json& j, const ReportTable& t) {
  j = {{"rows", t.rows},
       {"facets",
        {{"tier", nlohmann::json::object()}, {"agreeableness", nlohmann::json::object()}}}};
  for (const auto& [tier, rows] : t.tier_facets) j["facets"]["tier"][tier] = rows;
  for (const auto& [level, rows] : t.agreeableness_facets)
    j["facets"]["agreeableness"][level] = rows;
}

namespace detail {

inline std::string format_cell(const ReportCell& cell) {
  if (cell.count == 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", cell.mean);
  return buf;
}

inline void render_rows(std::string& out, const std::vector<ReportRow>& rows,
                        const std::string& task) {
  size_t name_width = 8;
  for (const auto& r : rows)
    if (r.task == task) name_width = std::max(name_width, r.endpoint_id.size());
  auto pad = [](std::string s, size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out += pad("model", name_width + 2) + pad("Avg.", 8);
  for (DomainId d : kAllDomains) out += pad(std::string(domain_abbrev(d)), 8);
  out += "\n";
  for (const auto& r : rows) {
    if (r.task != task) continue;
    out += pad(r.endpoint_id, name_width + 2) + pad(format_cell(r.overall), 8);
    for (DomainId d : kAllDomains) {
      auto it = r.by_domain.find(d);
      out += pad(it == r.by_domain.end() ? "-" : format_cell(it->second), 8);
    }
    out += "\n";
  }
}

}  // namespace detail

/// Aligned plain-text rendering: per task, rows of Avg. + six domain means.
inline std::string render_report(const ReportTable& table) {
  std::string out;
  for (const std::string task : {"planning", "guidance"}) {
    bool has_rows = false;
    for (const auto& r : table.rows) has_rows = has_rows || r.task == task;
    if (!has_rows) continue;
    out += "== " + task + " ==\n";
    detail::render_rows(out, table.rows, task);
    for (const auto& [tier, rows] : table.tier_facets) {
      bool any = false;
      for (const auto& r : rows) any = any || r.task == task;
      if (!any) continue;
      out += "-- tier: " + tier + " --\n";
      detail::render_rows(out, rows, task);
    }
    for (const auto& [level, rows] : table.agreeableness_facets) {
      bool any = false;
      for (const auto& r : rows) any = any || r.task == task;
      if (!any) continue;
      out += "-- agreeableness: " + level + " --\n";
      detail::render_rows(out, rows, task);
    }
    out += "\n";
  }
  return out;
}

/// Lifts planning results into score records; case lookup supplies the
/// domain and tier for the facets.
inline std::vector<ScoreRecord> planning_records(const std::vector<PlanningResult>& results,
                                                 const std::map<std::string, EvalCase>& cases) {
  std::vector<ScoreRecord> records;
  for (const auto& r : results) {
    auto it = cases.find(r.case_id);
    if (it == cases.end()) throw Error("planning result references unknown case " + r.case_id);
    ScoreRecord rec;
    rec.endpoint_id = r.endpoint_id;
    rec.task = "planning";
    rec.domain = it->second.domain;
    rec.tier = it->second.tier;
    rec.score = r.verdict.score;
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<ScoreRecord> guidance_records(const std::vector<GuidanceResult>& results,
                                                 const std::map<std::string, EvalCase>& cases) {
  std::vector<ScoreRecord> records;
  for (const auto& r : results) {
    auto it = cases.find(r.case_id);
    if (it == cases.end()) throw Error("guidance result references unknown case " + r.case_id);
    ScoreRecord rec;
    rec.endpoint_id = r.endpoint_id;
    rec.task = "guidance";
    rec.domain = it->second.domain;
    rec.tier = it->second.tier;
    rec.agreeableness = r.transcript.config.agreeableness;
    rec.score = r.verdict.score;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace proeval
