#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "proeval/asset_data.hpp"
#include "proeval/errors.hpp"
#include "proeval/util.hpp"

namespace proeval {

using Placeholders = std::map<std::string, std::string, std::less<>>;

/// Substitutes {name} placeholders in a prompt template.
///
/// Doubled braces escape literal braces ({{ -> {, }} -> }), matching how the
/// shipped templates spell out their JSON answer formats. Unknown placeholders
/// and stray braces are errors so a template/caller mismatch fails loudly
/// instead of sending a half-filled prompt to a model.
inline std::string fill_template(std::string_view tmpl, const Placeholders& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  for (size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if (c == '{') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
        out.push_back('{');
        ++i;
        continue;
      }
      size_t close = tmpl.find('}', i + 1);
      if (close == std::string_view::npos)
        throw Error("unterminated placeholder in template");
      std::string name(tmpl.substr(i + 1, close - i - 1));
      auto it = values.find(name);
      if (it == values.end()) throw Error("unknown placeholder {" + name + "}");
      out += it->second;
      i = close;
    } else if (c == '}') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
        out.push_back('}');
        ++i;
        continue;
      }
      throw Error("stray '}' in template");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

/// Named prompt templates. Compiled-in copies of assets/prompts/*.txt are the
/// default; a directory of .txt files can override them for experimentation.
class PromptLibrary {
 public:
  PromptLibrary() = default;

  explicit PromptLibrary(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("prompt directory not found: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".txt")
        overrides_[entry.path().stem().string()] = util::read_file(entry.path());
    }
  }

  std::string_view get(std::string_view name) const {
    if (auto it = overrides_.find(name); it != overrides_.end()) return it->second;
    for (const auto& [key, text] : asset_data::prompts)
      if (key == name) return text;
    throw Error("unknown prompt template: " + std::string(name));
  }

  std::string fill(std::string_view name, const Placeholders& values) const {
    return fill_template(get(name), values);
  }

 private:
  std::map<std::string, std::string, std::less<>> overrides_;
};

}  // namespace proeval
