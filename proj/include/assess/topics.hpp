#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "assess/error.hpp"

namespace assess {

struct TopicNode {
  std::string id;
  std::string name;
  std::optional<std::string> parent;  // absent for roots

  bool operator==(const TopicNode&) const = default;
};

/// Forest of topics. Node order is insertion order and is preserved through
/// import/export.
class TopicHierarchy {
 public:
  TopicHierarchy() = default;

  /// Builds a hierarchy from nodes in any order. Collects every violation
  /// (duplicate ids, unresolved parents, cycles) into one
  /// Error(ValidationError).
  static TopicHierarchy from_nodes(std::vector<TopicNode> nodes);

  // Throws DuplicateId, UnknownParent, or CycleDetected when `node.id`
  // already exists and `node.parent` lies inside its own subtree.
  void add(TopicNode node);
  // Re-parents `id`; nullopt makes it a root. Throws UnknownTopic,
  // UnknownParent, CycleDetected.
  void move(const std::string& id, std::optional<std::string> new_parent);
  void rename(const std::string& id, std::string name);
  // Leaf nodes only; throws TopicInUse when the node has children.
  void remove(const std::string& id);

  bool contains(const std::string& id) const { return index_.contains(id); }
  const TopicNode& at(const std::string& id) const;
  const std::vector<TopicNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  std::vector<std::string> roots() const;
  std::vector<std::string> children(const std::string& id) const;
  /// Parent chain from the immediate parent up to the root.
  std::vector<std::string> ancestors(const std::string& id) const;
  /// `id` and all of its descendants.
  std::set<std::string> subtree(const std::string& id) const;
  /// True when `id` equals `ancestor` or descends from it.
  bool is_within(const std::string& id, const std::string& ancestor) const;
  /// Roots have depth 0.
  int depth(const std::string& id) const;

  bool operator==(const TopicHierarchy& other) const { return nodes_ == other.nodes_; }

 private:
  void reindex();

  std::vector<TopicNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace assess
