#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "proeval/cases.hpp"
#include "proeval/errors.hpp"
#include "proeval/gateway.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/prompts.hpp"
#include "proeval/util.hpp"

namespace proeval {

struct TopicNode {
  std::string label;
  int depth = 0;
  std::vector<TopicNode> children;
};

/// Per-domain hierarchy of dialogue topics. The root names the domain, inner
/// levels narrow it down, and leaves seed individual environments.
struct TopicTree {
  DomainId domain_id = DomainId::recommendation;
  TopicNode root;
  int max_depth = 3;
  int branching = 8;
};

namespace detail {

inline bool find_path(const TopicNode& node, const TopicNode& wanted,
                      std::vector<const TopicNode*>& path) {
  path.push_back(&node);
  if (&node == &wanted) return true;
  for (const auto& child : node.children)
    if (find_path(child, wanted, path)) return true;
  path.pop_back();
  return false;
}

inline std::string join_path(const std::vector<const TopicNode*>& path) {
  std::string out;
  for (const auto* n : path) {
    if (!out.empty()) out += " / ";
    out += n->label;
  }
  return out;
}

}  // namespace detail

/// Root-to-node pointer chain; the node must live inside the tree.
inline std::vector<const TopicNode*> path_to_node(const TopicTree& tree, const TopicNode& node) {
  std::vector<const TopicNode*> path;
  if (!detail::find_path(tree.root, node, path))
    throw Error("node '" + node.label + "' is not part of the tree");
  return path;
}

inline void validate_tree(const TopicTree& tree) {
  if (tree.max_depth < 1 || tree.branching < 1)
    throw InvariantViolation("max_depth and branching must be positive");
  std::vector<const TopicNode*> path;
  auto walk = [&](auto&& self, const TopicNode& node) -> void {
    path.push_back(&node);
    std::string where = detail::join_path(path);
    if (util::trim(node.label).empty())
      throw InvariantViolation("empty label at " + where);
    int expected_depth = static_cast<int>(path.size()) - 1;
    if (node.depth != expected_depth)
      throw InvariantViolation("depth " + std::to_string(node.depth) + " at " + where +
                               "; expected " + std::to_string(expected_depth));
    if (node.depth > tree.max_depth)
      throw InvariantViolation("node beyond max_depth at " + where);
    if (static_cast<int>(node.children.size()) > tree.branching)
      throw InvariantViolation("more than " + std::to_string(tree.branching) + " children at " +
                               where);
    std::set<std::string> seen;
    for (const auto& child : node.children)
      if (!seen.insert(util::normalize_label(child.label)).second)
        throw InvariantViolation("duplicate sibling '" + child.label + "' under " + where);
    for (const auto& child : node.children) self(self, child);
    path.pop_back();
  };
  walk(walk, tree.root);
}

/// Fresh tree with fixture seed topics as the first level.
inline TopicTree make_seeded_tree(DomainId domain, const std::vector<std::string>& seed_topics,
                                  int max_depth = 3, int branching = 8) {
  TopicTree tree;
  tree.domain_id = domain;
  tree.max_depth = max_depth;
  tree.branching = branching;
  tree.root.label = domain_display_name(domain);
  tree.root.depth = 0;
  std::set<std::string> seen;
  for (const auto& topic : seed_topics) {
    std::string label = util::normalize_label(topic);
    if (label.empty() || !seen.insert(label).second) continue;
    if (static_cast<int>(tree.root.children.size()) >= branching) break;
    tree.root.children.push_back({label, 1, {}});
  }
  validate_tree(tree);
  return tree;
}

/// Asks the generator for up to n sub-topics of `node`. Labels come back as
/// the model produced them; merge_candidates owns normalization/dedup.
inline std::vector<std::string> expand_node(Gateway& gateway, const ModelEndpoint& generator,
                                            const PromptLibrary& prompts, const TopicTree& tree,
                                            const TopicNode& node, int n,
                                            const std::vector<std::string>& examples) {
  if (node.depth >= tree.max_depth)
    throw TooDeep("cannot expand '" + node.label + "' at depth " + std::to_string(node.depth) +
                  " (max_depth " + std::to_string(tree.max_depth) + ")");
  if (n < 1 || n > tree.branching)
    throw Error("expand_node n=" + std::to_string(n) + " outside 1.." +
                std::to_string(tree.branching));

  std::string example_block;
  for (const auto& e : examples) example_block += "- " + e + "\n";
  if (example_block.empty()) example_block = "(no examples available)\n";

  std::string prompt = prompts.fill("topic_expand", {{"n", std::to_string(n)},
                                                     {"topic", node.label},
                                                     {"Examples", example_block}});
  std::vector<ChatMessage> messages{user_message(prompt)};

  auto parse = [&](const std::string& content) -> std::vector<std::string> {
    nlohmann::json obj = extract_json(content);
    if (!obj.contains("topics") || !obj["topics"].is_array())
      throw MalformedJson("expansion reply lacks a 'topics' array");
    std::vector<std::string> labels;
    for (const auto& t : obj["topics"])
      if (t.is_string()) labels.push_back(t.get<std::string>());
    if (static_cast<int>(labels.size()) > n) labels.resize(n);
    return labels;
  };

  CompletionResult first = gateway.complete(generator, messages);
  try {
    return parse(first.content);
  } catch (const Error&) {
    CompleteOptions reask;
    reask.cache_salt = "reask1";
    CompletionResult second = gateway.complete(generator, messages, reask);
    return parse(second.content);  // second failure propagates
  }
}

/// Appends candidates as children of `node`, skipping anything that
/// normalizes to an existing sibling or ancestor label, until the branching
/// cap. Returns how many were added.
inline int merge_candidates(TopicTree& tree, TopicNode& node,
                            const std::vector<std::string>& candidates) {
  auto path = path_to_node(tree, node);
  std::set<std::string> blocked;
  for (const auto* ancestor : path) blocked.insert(util::normalize_label(ancestor->label));
  for (const auto& child : node.children) blocked.insert(util::normalize_label(child.label));

  if (node.depth >= tree.max_depth) return 0;  // children would breach max_depth
  int added = 0;
  for (const auto& candidate : candidates) {
    if (static_cast<int>(node.children.size()) >= tree.branching) break;
    std::string label = util::normalize_label(candidate);
    if (label.empty() || !blocked.insert(label).second) continue;
    node.children.push_back({label, node.depth + 1, {}});
    ++added;
  }
  return added;
}

inline void to_json(nlohmann::json& j, const TopicNode& node) {
  j = {{"label", node.label}, {"children", nlohmann::json::array()}};
  for (const auto& child : node.children) j["children"].push_back(child);
}

inline void to_json(nlohmann::json& j, const TopicTree& tree) {
  j = {{"domain_id", std::string(to_string(tree.domain_id))},
       {"max_depth", tree.max_depth},
       {"branching", tree.branching},
       {"root", tree.root}};
}

inline TopicNode node_from_json(const nlohmann::json& j, int depth) {
  TopicNode node;
  node.label = j.at("label").get<std::string>();
  node.depth = depth;
  if (j.contains("children"))
    for (const auto& child : j.at("children")) node.children.push_back(node_from_json(child, depth + 1));
  return node;
}

inline TopicTree tree_from_json(const nlohmann::json& j) {
  TopicTree tree;
  tree.domain_id = domain_from_string(j.at("domain_id").get<std::string>());
  tree.max_depth = j.at("max_depth").get<int>();
  tree.branching = j.at("branching").get<int>();
  tree.root = node_from_json(j.at("root"), 0);
  validate_tree(tree);
  return tree;
}

inline void export_tree(const TopicTree& tree, const std::filesystem::path& path) {
  validate_tree(tree);
  util::write_file_atomic(path, nlohmann::json(tree).dump(2) + "\n");
}

inline TopicTree import_tree(const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(util::read_file(path));
  return tree_from_json(j);
}

inline void collect_leaf_paths(const TopicNode& node, std::vector<std::string>& prefix,
                               std::vector<std::vector<std::string>>& out) {
  prefix.push_back(node.label);
  if (node.children.empty())
    out.push_back(prefix);
  else
    for (const auto& child : node.children) collect_leaf_paths(child, prefix, out);
  prefix.pop_back();
}

/// All root-to-leaf label paths in stable pre-order.
inline std::vector<std::vector<std::string>> leaf_paths(const TopicTree& tree) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> prefix;
  collect_leaf_paths(tree.root, prefix, out);
  return out;
}

/// Picks a leaf uniformly; the choice is a pure function of the seed.
inline std::vector<std::string> sample_leaf_path(const TopicTree& tree, uint64_t rng_seed) {
  auto paths = leaf_paths(tree);
  if (paths.empty()) throw Error("tree has no leaves");
  uint64_t index = util::mix_seed(rng_seed) % paths.size();
  return paths[index];
}

/// True when nothing is left to expand: every node above the depth cap
/// already has children.
inline bool tree_saturated(const TopicTree& tree) {
  bool saturated = true;
  auto walk = [&](auto&& self, const TopicNode& node) -> void {
    if (node.depth < tree.max_depth && node.children.empty()) saturated = false;
    for (const auto& child : node.children) self(self, child);
  };
  walk(walk, tree.root);
  return saturated;
}

/// Expands every childless node above the depth cap, level by level, until
/// the tree is saturated. Already-expanded nodes are left alone, which makes
/// repeated calls no-ops. Model calls for one level fan out across workers;
/// merges stay sequential so sibling/ancestor dedup sees a consistent tree.
/// Returns the number of nodes expanded.
inline int grow_missing(Gateway& gateway, const ModelEndpoint& generator,
                        const PromptLibrary& prompts, TopicTree& tree, int workers = 1) {
  int expanded = 0;
  for (int depth = 0; depth < tree.max_depth; ++depth) {
    std::vector<TopicNode*> level;
    auto collect = [&](auto&& self, TopicNode& node) -> void {
      if (node.depth == depth && node.children.empty())
        level.push_back(&node);
      else
        for (auto& child : node.children) self(self, child);
    };
    collect(collect, tree.root);
    if (level.empty()) continue;

    // Cousin labels at the level being generated make the best in-context
    // examples; fall back to the first-level topics before any exist.
    std::vector<std::string> examples;
    for (const auto& path : leaf_paths(tree)) {
      if (static_cast<int>(path.size()) > depth + 1) examples.push_back(path[depth + 1]);
      if (examples.size() >= 4) break;
    }
    if (examples.empty())
      for (const auto& child : tree.root.children) {
        examples.push_back(child.label);
        if (examples.size() >= 4) break;
      }

    std::vector<std::vector<std::string>> results(level.size());
    std::vector<size_t> indices(level.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    util::parallel_for_each(indices, workers, [&](size_t i) {
      results[i] =
          expand_node(gateway, generator, prompts, tree, *level[i], tree.branching, examples);
    });
    for (size_t i = 0; i < level.size(); ++i) merge_candidates(tree, *level[i], results[i]);
    expanded += static_cast<int>(level.size());
  }
  validate_tree(tree);
  return expanded;
}

inline TopicTree grow_tree(Gateway& gateway, const ModelEndpoint& generator,
                           const PromptLibrary& prompts, DomainId domain,
                           const std::vector<std::string>& seed_topics, int max_depth,
                           int branching, int workers = 1) {
  TopicTree tree = make_seeded_tree(domain, seed_topics, max_depth, branching);
  grow_missing(gateway, generator, prompts, tree, workers);
  return tree;
}

}  // namespace proeval
