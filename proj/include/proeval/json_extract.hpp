#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "proeval/errors.hpp"

namespace proeval {

/// Pulls the first balanced top-level JSON object out of free-form model text.
///
/// Models wrap their answers in prose and code fences no matter how firmly the
/// prompt says "Just return a JSON"; this strips all of that and nothing else.
/// A balanced-but-invalid object is an error, never repaired: callers own the
/// single re-ask.
inline nlohmann::json extract_json(std::string_view content) {
  size_t start = content.find('{');
  if (start == std::string_view::npos)
    throw NoJsonFound("no JSON object in model output: " +
                      std::string(content.substr(0, 120)));

  int depth = 0;
  bool in_string = false, escaped = false;
  for (size_t i = start; i < content.size(); ++i) {
    char c = content[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) {
        std::string_view candidate = content.substr(start, i - start + 1);
        nlohmann::json parsed =
            nlohmann::json::parse(candidate, /*cb=*/nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded())
          throw MalformedJson("unparseable JSON object in model output: " +
                              std::string(candidate.substr(0, 200)));
        return parsed;
      }
    }
  }
  throw MalformedJson("unbalanced JSON object in model output: " +
                      std::string(content.substr(start, 200)));
}

/// extract_json that reports failure as nullopt instead of throwing.
inline std::optional<nlohmann::json> try_extract_json(std::string_view content) {
  try {
    return extract_json(content);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace proeval
