#pragma once

#include <bit>
#include <fstream>
#include <random>

#include "foon/collaboration.hpp"
#include "foon/parse.hpp"
#include "foon/retrieval.hpp"

// Test-only helpers: fixture loading, an independent brute-force
// backward-chaining oracle for task-tree enumeration, a brute-force
// delegation maximizer, and a seeded random acyclic network generator.

namespace foontest {

inline std::string fixture_path(const std::string& name) {
  return std::string(FOON_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  return foon::read_file(fixture_path(name));
}

inline foon::Subgraph load_subgraph(const std::string& name) {
  return foon::parse_subgraph(read_fixture(name), name);
}

inline foon::KitchenInventory load_kitchen(const std::string& name) {
  return foon::parse_kitchen(read_fixture(name));
}

inline foon::RobotProfile load_profile(const std::string& name) {
  return foon::parse_profile(read_fixture(name));
}

// ---------------------------------------------------------------------------
// Brute-force enumeration oracle.
//
// Recursive backward chaining, written against the same choice semantics as
// the planner but with none of its machinery: no forest, no index (producers
// found by linear scan), plain recursion over combinations. A combination's
// pending inputs are resolved occurrence by occurrence; candidates already on
// the chain (including the current combination) are skipped; the Cartesian
// product of the remaining choices spawns child combinations.

inline std::vector<int> oracle_producers(const foon::UniversalFoon& foon,
                                         const std::string& key,
                                         const std::set<int>& banned) {
  std::vector<int> out;
  for (const auto& unit : foon.units) {
    if (banned.count(unit.id)) continue;
    for (const auto& node : unit.outputs)
      if (foon::object_identity(node) == key) {
        out.push_back(unit.id);
        break;
      }
  }
  return out;
}

inline void oracle_solve(const foon::UniversalFoon& foon,
                         const std::set<int>& combo, const std::set<int>& banned,
                         std::set<std::set<int>>& out) {
  std::vector<std::vector<int>> choices;
  for (int id : combo)
    for (const auto& node : foon.unit(id).inputs) {
      auto candidates =
          oracle_producers(foon, foon::object_identity(node), banned);
      if (!candidates.empty()) choices.push_back(std::move(candidates));
    }
  if (choices.empty()) {
    out.insert(std::set<int>{});
    return;
  }

  std::vector<size_t> pick(choices.size(), 0);
  while (true) {
    std::set<int> child;
    for (size_t i = 0; i < choices.size(); ++i)
      child.insert(choices[i][pick[i]]);

    std::set<int> child_banned(banned);
    child_banned.insert(child.begin(), child.end());
    std::set<std::set<int>> below;
    oracle_solve(foon, child, child_banned, below);
    for (const auto& sub : below) {
      std::set<int> units(child);
      units.insert(sub.begin(), sub.end());
      out.insert(std::move(units));
    }

    size_t i = 0;
    for (; i < choices.size(); ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == choices.size()) break;
  }
}

// Fixpoint executability: some goal producer can run last, after every other
// unit has fired from the kitchen.
inline bool oracle_executable(const foon::UniversalFoon& foon,
                              const std::set<int>& units,
                              const foon::KitchenInventory& kitchen,
                              const std::string& goal_key) {
  auto produces_goal = [&](int id) {
    for (const auto& node : foon.unit(id).outputs)
      if (foon::object_identity(node) == goal_key) return true;
    return false;
  };
  for (int last : units) {
    if (!produces_goal(last)) continue;
    std::set<std::string> available;
    for (const auto& [key, node] : kitchen.items) available.insert(key);
    std::set<int> remaining(units);
    remaining.erase(last);
    bool progress = true;
    while (progress) {
      progress = false;
      for (int id : remaining) {
        bool ok = true;
        for (const auto& node : foon.unit(id).inputs)
          if (!available.count(foon::object_identity(node))) {
            ok = false;
            break;
          }
        if (!ok) continue;
        for (const auto& node : foon.unit(id).outputs)
          available.insert(foon::object_identity(node));
        remaining.erase(id);
        progress = true;
        break;
      }
    }
    if (!remaining.empty()) continue;
    bool ok = true;
    for (const auto& node : foon.unit(last).inputs)
      if (!available.count(foon::object_identity(node))) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

// All executable task trees, as unit-sets.
inline std::set<std::set<int>> oracle_task_trees(
    const foon::UniversalFoon& foon, const foon::ObjectNode& goal,
    const foon::KitchenInventory& kitchen) {
  std::string goal_key = foon::object_identity(goal);
  std::set<std::set<int>> all;
  for (int root : oracle_producers(foon, goal_key, {})) {
    std::set<std::set<int>> below;
    oracle_solve(foon, {root}, {root}, below);
    for (const auto& sub : below) {
      std::set<int> units(sub);
      units.insert(root);
      all.insert(std::move(units));
    }
  }
  std::set<std::set<int>> executable;
  for (const auto& units : all)
    if (oracle_executable(foon, units, kitchen, goal_key))
      executable.insert(units);
  return executable;
}

inline std::set<std::set<int>> as_unit_sets(const std::vector<foon::TaskTree>& trees) {
  std::set<std::set<int>> out;
  for (const auto& tree : trees)
    out.emplace(tree.units.begin(), tree.units.end());
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force delegation: maximum product over all C(N, m) executor subsets.

inline double brute_force_best_delegation(const std::vector<double>& rates,
                                          double assistant_rate, int m) {
  const int n = int(rates.size());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (int(std::popcount(mask)) != m) continue;
    double product = 1.0;
    for (int i = 0; i < n; ++i)
      product *= (mask >> i & 1u) ? assistant_rate : rates[size_t(i)];
    best = std::max(best, product);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Seeded random acyclic network: objects are layered, a unit's inputs come
// from strictly lower layers than its outputs, at most 3 producers per
// object, at most 10 units.

struct RandomScenario {
  foon::UniversalFoon foon;
  foon::ObjectNode goal;
  foon::KitchenInventory kitchen;
};

inline foon::ObjectNode numbered_object(int i) {
  return foon::ObjectNode{"obj" + std::to_string(i), {}, {}};
}

inline RandomScenario random_acyclic_scenario(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return int(std::uniform_int_distribution<int>(lo, hi)(rng));
  };
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };

  const int num_objects = pick(4, 12);
  std::vector<int> producer_count(size_t(num_objects), 0);
  foon::Subgraph sg{"random", {}};

  for (int obj = 1; obj < num_objects && int(sg.units.size()) < 10; ++obj) {
    int producers = pick(0, 3);
    for (int p = 0; p < producers && int(sg.units.size()) < 10; ++p) {
      if (producer_count[size_t(obj)] >= 3) break;
      foon::FunctionalUnit unit;
      int num_inputs = pick(1, std::min(3, obj));
      std::set<int> inputs;
      while (int(inputs.size()) < num_inputs) inputs.insert(pick(0, obj - 1));
      for (int i : inputs) unit.inputs.push_back(numbered_object(i));
      unit.outputs.push_back(numbered_object(obj));
      producer_count[size_t(obj)] += 1;
      if (obj + 1 < num_objects && chance(0.25)) {
        int extra = pick(obj + 1, num_objects - 1);
        if (producer_count[size_t(extra)] < 3) {
          unit.outputs.push_back(numbered_object(extra));
          producer_count[size_t(extra)] += 1;
        }
      }
      unit.motion.label = "motion" + std::to_string(pick(0, 5));
      sg.units.push_back(std::move(unit));
    }
  }
  if (sg.units.empty()) {
    foon::FunctionalUnit unit;
    unit.inputs.push_back(numbered_object(0));
    unit.outputs.push_back(numbered_object(1));
    unit.motion.label = "motion0";
    sg.units.push_back(std::move(unit));
    producer_count[1] = 1;
  }

  RandomScenario scenario;
  scenario.foon = foon::merge({sg});

  int goal_obj = 1;
  for (int obj = num_objects - 1; obj >= 1; --obj)
    if (producer_count[size_t(obj)] > 0) {
      goal_obj = obj;
      break;
    }
  scenario.goal = numbered_object(goal_obj);

  for (int obj = 0; obj < num_objects; ++obj) {
    double p = producer_count[size_t(obj)] == 0 ? 0.9 : 0.2;
    if (chance(p)) {
      auto node = numbered_object(obj);
      scenario.kitchen.items.emplace(foon::object_identity(node), node);
    }
  }
  return scenario;
}

// Random tree + profile pair for delegation properties.
struct RandomTreeScenario {
  foon::UniversalFoon foon;
  foon::TaskTree tree;
  foon::RobotProfile profile;
};

inline RandomTreeScenario random_chain_tree(uint64_t seed, int max_units = 12) {
  std::mt19937_64 rng(seed);
  const int n = std::uniform_int_distribution<int>(1, max_units)(rng);
  std::uniform_real_distribution<double> rate(0.01, 1.0);

  foon::Subgraph sg{"chain", {}};
  for (int i = 0; i < n; ++i) {
    foon::FunctionalUnit unit;
    unit.inputs.push_back(numbered_object(i));
    unit.outputs.push_back(numbered_object(i + 1));
    unit.motion.label = "step" + std::to_string(i);
    sg.units.push_back(std::move(unit));
  }

  RandomTreeScenario scenario;
  scenario.foon = foon::merge({sg});
  scenario.tree.goal_key = foon::object_identity(numbered_object(n));
  // canonical ids follow motion label order; recover execution order by input
  std::map<std::string, int> by_input;
  for (const auto& unit : scenario.foon.units)
    by_input[foon::object_identity(unit.inputs[0])] = unit.id;
  for (int i = 0; i < n; ++i)
    scenario.tree.units.push_back(by_input.at(foon::object_identity(numbered_object(i))));

  scenario.profile.default_rate = 0.9;
  for (const auto& unit : scenario.foon.units)
    scenario.profile.unit_rates[unit.id] = rate(rng);
  return scenario;
}

}  // namespace foontest
