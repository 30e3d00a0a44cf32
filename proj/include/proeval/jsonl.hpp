#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/errors.hpp"
#include "proeval/util.hpp"

namespace proeval {

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error(path.string() + ":" + std::to_string(line_no) + ": invalid JSON line");
    out.push_back(j.get<T>());
  }
  return out;
}

/// Whole-file write through a temp file; single dump() per line so the
/// output is byte-stable for identical inputs.
template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items) {
  std::string body;
  for (const auto& item : items) body += nlohmann::json(item).dump() + "\n";
  util::write_file_atomic(path, body);
}

template <typename T>
void append_jsonl(const std::filesystem::path& path, const T& item) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out << nlohmann::json(item).dump() << "\n";
  if (!out) throw Error("short write to " + path.string());
}

}  // namespace proeval
