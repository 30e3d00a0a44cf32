#pragma once

#include <ctime>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "proeval/errors.hpp"
#include "proeval/util.hpp"

namespace proeval {

enum class CaseStatus { pending, done, failed };

inline std::string_view to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::pending: return "pending";
    case CaseStatus::done: return "done";
    case CaseStatus::failed: return "failed";
  }
  return "pending";
}

inline CaseStatus case_status_from_string(std::string_view name) {
  if (name == "pending") return CaseStatus::pending;
  if (name == "done") return CaseStatus::done;
  if (name == "failed") return CaseStatus::failed;
  throw Error("unknown case status '" + std::string(name) + "'");
}

inline std::string now_iso8601() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Progress ledger for one stage of one run. The done-set only ever grows:
/// once a case is done it can never be demoted, which is what makes resumed
/// runs skip finished work safely.
struct RunManifest {
  std::string run_id;
  std::string config_hash;
  std::string stage;
  std::string created_at;
  std::string updated_at;
  std::map<std::string, CaseStatus> status;

  void mark(const std::string& key, CaseStatus next) {
    auto it = status.find(key);
    if (it != status.end() && it->second == CaseStatus::done && next != CaseStatus::done)
      throw Error("manifest: case '" + key + "' is done and cannot be demoted");
    status[key] = next;
    updated_at = now_iso8601();
  }

  bool is_done(const std::string& key) const {
    auto it = status.find(key);
    return it != status.end() && it->second == CaseStatus::done;
  }

  int count(CaseStatus wanted) const {
    int n = 0;
    for (const auto& [key, s] : status)
      if (s == wanted) ++n;
    return n;
  }

  bool all_done() const {
    for (const auto& [key, s] : status)
      if (s != CaseStatus::done) return false;
    return true;
  }
};

inline void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"run_id", m.run_id},
       {"config_hash", m.config_hash},
       {"stage", m.stage},
       {"created_at", m.created_at},
       {"updated_at", m.updated_at},
       {"status", nlohmann::json::object()}};
  for (const auto& [key, s] : m.status) j["status"][key] = std::string(to_string(s));
}
inline void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("run_id").get_to(m.run_id);
  j.at("config_hash").get_to(m.config_hash);
  j.at("stage").get_to(m.stage);
  j.at("created_at").get_to(m.created_at);
  j.at("updated_at").get_to(m.updated_at);
  m.status.clear();
  for (const auto& [key, s] : j.at("status").items())
    m.status[key] = case_status_from_string(s.get<std::string>());
}

inline RunManifest make_manifest(std::string run_id, std::string config_hash, std::string stage) {
  RunManifest m;
  m.run_id = std::move(run_id);
  m.config_hash = std::move(config_hash);
  m.stage = std::move(stage);
  m.created_at = now_iso8601();
  m.updated_at = m.created_at;
  return m;
}

inline void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
  util::write_file_atomic(path, nlohmann::json(m).dump(2) + "\n");
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  return nlohmann::json::parse(util::read_file(path)).get<RunManifest>();
}

}  // namespace proeval
