#pragma once

#include <deque>
#include <optional>

#include "foon/model.hpp"
#include "foon/parse.hpp"

// Exhaustive task-tree retrieval: backward from a goal object, build a path
// forest whose nodes are unit combinations jointly producing their parent's
// inputs (Cartesian product over per-input candidate sets, ancestor-checked),
// then enumerate root-to-leaf paths into executable task trees. A greedy
// first-hit variant is provided as the baseline.

namespace foon {

struct ExpansionLimits {
  size_t max_nodes = 100000;
  size_t max_children = 4096;  // per-expansion Cartesian product size
  size_t max_depth = 64;
};

// A combination of units that jointly produces the parent's unsatisfied
// inputs. Roots hold exactly one unit (a producer of the goal).
struct PathTreeNode {
  std::vector<int> units;  // sorted unit ids
  int parent = -1;         // index into PathForest::nodes, -1 for roots
  std::vector<int> children;
  size_t depth = 0;
};

struct PathForest {
  std::vector<PathTreeNode> nodes;
  std::vector<int> roots;  // indices into nodes
  std::string goal_key;
};

// Executable ordered unit sequence: dependencies first, goal produced by the
// final unit.
struct TaskTree {
  std::string goal_key;
  std::vector<int> units;  // execution order

  std::vector<int> unit_set() const {
    std::vector<int> ids(units);
    std::sort(ids.begin(), ids.end());
    return ids;
  }
};

struct TreeMetrics {
  size_t length = 0;
  std::vector<int> unit_ids;  // execution order
  size_t depth = 0;           // longest dependency chain
};

inline std::vector<int> find_roots(const UniversalFoon& foon,
                                   const ObjectNode& goal) {
  std::vector<int> roots = foon.producers_of(goal);
  if (roots.empty())
    throw GoalNotProducibleError("goal not producible: " + object_display(goal));
  return roots;
}

namespace detail {

// One entry per input occurrence of every unit in the node; occurrences are
// independent Cartesian dimensions even when keys repeat.
inline std::vector<std::string> node_input_keys(const UniversalFoon& foon,
                                                const std::vector<int>& units) {
  std::vector<std::string> keys;
  for (int id : units)
    for (const auto& node : foon.unit(id).inputs)
      keys.push_back(object_identity(node));
  return keys;
}

inline std::set<int> ancestor_units(const PathForest& forest, int node_index) {
  std::set<int> out;
  for (int i = node_index; i != -1; i = forest.nodes[size_t(i)].parent)
    for (int id : forest.nodes[size_t(i)].units) out.insert(id);
  return out;
}

}  // namespace detail

// Breadth-first expansion until no new leaf nodes can be added. The kitchen
// does not participate here; executability is decided at enumeration time, so
// the forest is reusable across kitchens.
inline PathForest build_path_forest(const UniversalFoon& foon,
                                    const ObjectNode& goal,
                                    const ExpansionLimits& limits = {}) {
  PathForest forest;
  forest.goal_key = object_identity(goal);
  for (int id : find_roots(foon, goal)) {
    PathTreeNode root;
    root.units = {id};
    forest.roots.push_back(int(forest.nodes.size()));
    forest.nodes.push_back(std::move(root));
  }

  auto limit_error = [&](const std::string& what) {
    throw ExpansionLimitError("expansion limit exceeded (" + what + "); " +
                              std::to_string(forest.nodes.size()) +
                              " nodes built so far");
  };

  std::deque<int> queue(forest.roots.begin(), forest.roots.end());
  while (!queue.empty()) {
    int index = queue.front();
    queue.pop_front();

    std::set<int> ancestors = detail::ancestor_units(forest, index);
    std::vector<std::vector<int>> candidate_sets;
    for (const auto& key : detail::node_input_keys(foon, forest.nodes[size_t(index)].units)) {
      auto it = foon.object_index.find(key);
      std::vector<int> candidates;
      if (it != foon.object_index.end()) {
        for (int id : it->second.producers)
          if (!ancestors.count(id)) candidates.push_back(id);
      }
      // no producers: this input is a leaf, satisfied (or not) by the kitchen
      if (!candidates.empty()) candidate_sets.push_back(std::move(candidates));
    }
    if (candidate_sets.empty()) continue;

    size_t product_size = 1;
    for (const auto& set : candidate_sets) {
      product_size *= set.size();
      if (product_size > limits.max_children) limit_error("max_children");
    }

    size_t depth = forest.nodes[size_t(index)].depth + 1;
    if (depth > limits.max_depth) limit_error("max_depth");

    std::set<std::vector<int>> child_sets;  // dedup combinations as unit-sets
    for (size_t combo = 0; combo < product_size; ++combo) {
      std::set<int> unit_set;
      size_t rest = combo;
      for (size_t i = 0; i < candidate_sets.size(); ++i) {
        unit_set.insert(candidate_sets[i][rest % candidate_sets[i].size()]);
        rest /= candidate_sets[i].size();
      }
      child_sets.emplace(unit_set.begin(), unit_set.end());
    }

    for (const auto& units : child_sets) {
      if (forest.nodes.size() >= limits.max_nodes) limit_error("max_nodes");
      PathTreeNode child;
      child.units = units;
      child.parent = index;
      child.depth = depth;
      int child_index = int(forest.nodes.size());
      forest.nodes.push_back(std::move(child));
      forest.nodes[size_t(index)].children.push_back(child_index);
      queue.push_back(child_index);
    }
  }
  return forest;
}

namespace detail {

// Kahn-style ordering against the kitchen with the goal produced by the
// final unit: a goal producer is held back, the rest are emitted lowest id
// first as their inputs become available. Returns nothing when the unit set
// is not executable from the kitchen.
inline std::optional<std::vector<int>> order_executable(
    const UniversalFoon& foon, const std::vector<int>& unit_ids,
    const KitchenInventory& kitchen, const std::string& goal_key) {
  std::vector<int> sorted_ids(unit_ids);
  std::sort(sorted_ids.begin(), sorted_ids.end());
  if (sorted_ids.empty()) return std::vector<int>{};

  auto produces_goal = [&](int id) {
    for (const auto& node : foon.unit(id).outputs)
      if (object_identity(node) == goal_key) return true;
    return false;
  };

  for (int last : sorted_ids) {
    if (!produces_goal(last)) continue;

    std::set<std::string> available;
    for (const auto& [key, node] : kitchen.items) available.insert(key);
    auto ready = [&](int id) {
      for (const auto& node : foon.unit(id).inputs)
        if (!available.count(object_identity(node))) return false;
      return true;
    };

    std::vector<int> remaining;
    for (int id : sorted_ids)
      if (id != last) remaining.push_back(id);
    std::vector<int> order;
    order.reserve(sorted_ids.size());
    bool progress = true;
    while (!remaining.empty() && progress) {
      progress = false;
      for (auto it = remaining.begin(); it != remaining.end(); ++it)
        if (ready(*it)) {
          order.push_back(*it);
          for (const auto& node : foon.unit(*it).outputs)
            available.insert(object_identity(node));
          remaining.erase(it);
          progress = true;
          break;
        }
    }
    if (!remaining.empty() || !ready(last)) continue;
    order.push_back(last);
    return order;
  }
  return std::nullopt;
}

}  // namespace detail

// DFS over each root; the union of unit combinations along every root-to-leaf
// path is a candidate tree. Trees that cannot be ordered executably against
// the kitchen are discarded; results are deduplicated by unit set.
inline std::vector<TaskTree> enumerate_task_trees(const PathForest& forest,
                                                  const UniversalFoon& foon,
                                                  const KitchenInventory& kitchen) {
  std::vector<TaskTree> trees;
  std::set<std::vector<int>> seen;

  std::vector<int> stack_units;
  auto visit = [&](auto&& self, int index, std::set<int> units) -> void {
    const PathTreeNode& node = forest.nodes[size_t(index)];
    units.insert(node.units.begin(), node.units.end());
    if (node.children.empty()) {
      std::vector<int> unit_set(units.begin(), units.end());
      if (!seen.insert(unit_set).second) return;
      auto order = detail::order_executable(foon, unit_set, kitchen, forest.goal_key);
      if (!order) return;
      trees.push_back(TaskTree{forest.goal_key, std::move(*order)});
      return;
    }
    for (int child : node.children) self(self, child, units);
  };
  for (int root : forest.roots) visit(visit, root, {});
  return trees;
}

// Greedy kitchen-driven baseline: candidate producers tried depth-first in id
// order, inputs checked against the kitchen; first fully satisfiable tree
// wins. Returns nothing on planning failure.
inline std::optional<TaskTree> greedy_retrieve(const UniversalFoon& foon,
                                               const ObjectNode& goal,
                                               const KitchenInventory& kitchen) {
  std::string goal_key = object_identity(goal);
  if (kitchen.contains_key(goal_key)) return TaskTree{goal_key, {}};

  std::vector<int> chosen;
  std::set<int> chosen_set;
  std::set<std::string> produced;
  std::set<int> in_progress;

  auto satisfy = [&](auto&& self, const std::string& key) -> bool {
    if (kitchen.contains_key(key) || produced.count(key)) return true;
    auto it = foon.object_index.find(key);
    if (it == foon.object_index.end()) return false;
    for (int id : it->second.producers) {
      if (in_progress.count(id) || chosen_set.count(id)) continue;
      in_progress.insert(id);
      size_t mark = chosen.size();
      auto produced_mark = produced;
      bool ok = true;
      for (const auto& node : foon.unit(id).inputs)
        if (!self(self, object_identity(node))) {
          ok = false;
          break;
        }
      in_progress.erase(id);
      if (ok) {
        chosen.push_back(id);
        chosen_set.insert(id);
        for (const auto& node : foon.unit(id).outputs)
          produced.insert(object_identity(node));
        return true;
      }
      while (chosen.size() > mark) {
        chosen_set.erase(chosen.back());
        chosen.pop_back();
      }
      produced = std::move(produced_mark);
    }
    return false;
  };

  if (!satisfy(satisfy, goal_key)) return std::nullopt;
  return TaskTree{goal_key, chosen};
}

inline TreeMetrics tree_metrics(const UniversalFoon& foon, const TaskTree& tree) {
  TreeMetrics metrics;
  metrics.length = tree.units.size();
  metrics.unit_ids = tree.units;

  // depth of u = 1 + max depth over earlier units feeding an input of u
  std::vector<size_t> depth(tree.units.size(), 1);
  for (size_t i = 0; i < tree.units.size(); ++i) {
    std::set<std::string> needs;
    for (const auto& node : foon.unit(tree.units[i]).inputs)
      needs.insert(object_identity(node));
    for (size_t j = 0; j < i; ++j) {
      bool feeds = false;
      for (const auto& node : foon.unit(tree.units[j]).outputs)
        if (needs.count(object_identity(node))) {
          feeds = true;
          break;
        }
      if (feeds) depth[i] = std::max(depth[i], depth[j] + 1);
    }
    metrics.depth = std::max(metrics.depth, depth[i]);
  }
  return metrics;
}

}  // namespace foon
