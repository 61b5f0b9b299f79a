#include "assess/topics.hpp"

#include <algorithm>
#include <unordered_set>

namespace assess {

TopicHierarchy TopicHierarchy::from_nodes(std::vector<TopicNode> nodes) {
  std::vector<Violation> violations;
  std::unordered_map<std::string, const TopicNode*> by_id;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto path = "topics[" + std::to_string(i) + "]";
    if (nodes[i].id.empty()) {
      violations.push_back({ErrorCode::InvalidArgument, path + ".id", "empty topic id"});
    } else if (!by_id.emplace(nodes[i].id, &nodes[i]).second) {
      violations.push_back({ErrorCode::DuplicateId, path + ".id", "duplicate topic id '" + nodes[i].id + "'"});
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& parent = nodes[i].parent;
    if (parent && !by_id.contains(*parent)) {
      violations.push_back({ErrorCode::UnknownParent, "topics[" + std::to_string(i) + "].parent",
                            "unknown parent '" + *parent + "'"});
    }
  }
  // Each node walks its parent chain; revisiting a node on the same walk is a cycle.
  std::unordered_set<std::string> reported;
  for (const auto& node : nodes) {
    std::unordered_set<std::string> path;
    const TopicNode* cur = &node;
    while (cur) {
      if (!path.insert(cur->id).second) {
        if (reported.insert(cur->id).second) {
          violations.push_back({ErrorCode::CycleDetected, cur->id, "topic '" + cur->id + "' is its own ancestor"});
        }
        break;
      }
      if (!cur->parent) break;
      auto it = by_id.find(*cur->parent);
      cur = it == by_id.end() ? nullptr : it->second;
    }
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::ValidationError, "invalid topic hierarchy", std::move(violations));
  }
  TopicHierarchy h;
  h.nodes_ = std::move(nodes);
  h.reindex();
  return h;
}

void TopicHierarchy::add(TopicNode node) {
  if (node.id.empty()) throw Error(ErrorCode::InvalidArgument, "empty topic id");
  if (contains(node.id)) {
    if (node.parent && contains(*node.parent) && is_within(*node.parent, node.id)) {
      throw Error(ErrorCode::CycleDetected,
                  "placing '" + node.id + "' under '" + *node.parent + "' would create a cycle");
    }
    throw Error(ErrorCode::DuplicateId, "topic '" + node.id + "' already exists");
  }
  if (node.parent && !contains(*node.parent)) {
    throw Error(ErrorCode::UnknownParent, "unknown parent '" + *node.parent + "'");
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
}

void TopicHierarchy::move(const std::string& id, std::optional<std::string> new_parent) {
  if (!contains(id)) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + id + "'");
  if (new_parent) {
    if (!contains(*new_parent)) throw Error(ErrorCode::UnknownParent, "unknown parent '" + *new_parent + "'");
    if (is_within(*new_parent, id)) {
      throw Error(ErrorCode::CycleDetected,
                  "moving '" + id + "' under '" + *new_parent + "' would create a cycle");
    }
  }
  nodes_[index_.at(id)].parent = std::move(new_parent);
}

void TopicHierarchy::rename(const std::string& id, std::string name) {
  if (!contains(id)) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + id + "'");
  nodes_[index_.at(id)].name = std::move(name);
}

void TopicHierarchy::remove(const std::string& id) {
  if (!contains(id)) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + id + "'");
  if (!children(id).empty()) throw Error(ErrorCode::TopicInUse, "topic '" + id + "' has children");
  nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(index_.at(id)));
  reindex();
}

const TopicNode& TopicHierarchy::at(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + id + "'");
  return nodes_[it->second];
}

std::vector<std::string> TopicHierarchy::roots() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (!n.parent) out.push_back(n.id);
  }
  return out;
}

std::vector<std::string> TopicHierarchy::children(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.parent == id) out.push_back(n.id);
  }
  return out;
}

std::vector<std::string> TopicHierarchy::ancestors(const std::string& id) const {
  std::vector<std::string> out;
  const TopicNode* cur = &at(id);
  while (cur->parent) {
    out.push_back(*cur->parent);
    cur = &at(*cur->parent);
  }
  return out;
}

std::set<std::string> TopicHierarchy::subtree(const std::string& id) const {
  at(id);
  std::set<std::string> out;
  for (const auto& n : nodes_) {
    if (is_within(n.id, id)) out.insert(n.id);
  }
  return out;
}

bool TopicHierarchy::is_within(const std::string& id, const std::string& ancestor) const {
  const TopicNode* cur = &at(id);
  while (true) {
    if (cur->id == ancestor) return true;
    if (!cur->parent) return false;
    cur = &at(*cur->parent);
  }
}

int TopicHierarchy::depth(const std::string& id) const {
  return static_cast<int>(ancestors(id).size());
}

void TopicHierarchy::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
}

}  // namespace assess
