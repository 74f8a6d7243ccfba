#pragma once

#include <cmath>
#include <numeric>

#include "foon/retrieval.hpp"

// Joint-success scoring of task trees under a robot profile, optimal
// assignment of M human-assisted steps, per-M best-tree selection, and the
// M-sweep report.

namespace foon {

enum class Executor { Robot, Human };

// A task tree with a per-unit executor assignment and its joint success rate.
struct DelegationPlan {
  TaskTree tree;
  int m = 0;
  std::vector<Executor> assignment;  // parallel to tree.units
  std::vector<double> rates;         // effective per-unit rates
  double total_success = 1.0;
  bool vacuous = false;  // empty tree: total is the vacuous product
};

inline double unit_rate(const RobotProfile& profile, const FunctionalUnit& unit) {
  if (auto it = profile.unit_rates.find(unit.id); it != profile.unit_rates.end())
    return it->second;
  if (auto it = profile.motion_rates.find(to_lower(trim(unit.motion.label)));
      it != profile.motion_rates.end())
    return it->second;
  return profile.default_rate;
}

// Product of per-unit rates, accumulated in log-space: deep trees reach 1e-5
// scale and below.
inline double product_of_rates(const std::vector<double>& rates) {
  double log_sum = 0.0;
  for (double r : rates) log_sum += std::log(r);
  return std::exp(log_sum);
}

inline double joint_success(const UniversalFoon& foon, const TaskTree& tree,
                            const RobotProfile& profile) {
  std::vector<double> rates;
  rates.reserve(tree.units.size());
  for (int id : tree.units) rates.push_back(unit_rate(profile, foon.unit(id)));
  return product_of_rates(rates);
}

// Tags the m units whose replacement by the assistant maximizes the joint
// product: the m smallest robot rates, ties broken by lowest unit id.
inline DelegationPlan assign_human_steps(const UniversalFoon& foon,
                                         const TaskTree& tree,
                                         const RobotProfile& profile, int m) {
  const int n = int(tree.units.size());
  if (m < 0) throw DelegationError("M must be non-negative");
  if (n > 0 && m >= n)
    throw DelegationError("assistant would perform the entire task (M=" +
                          std::to_string(m) + ", tree length " +
                          std::to_string(n) + ")");
  if (n == 0 && m > 0)
    throw DelegationError("no steps to delegate in an empty tree");

  DelegationPlan plan;
  plan.tree = tree;
  plan.m = m;
  plan.vacuous = (n == 0);
  plan.assignment.assign(size_t(n), Executor::Robot);
  plan.rates.resize(size_t(n));
  for (int i = 0; i < n; ++i)
    plan.rates[size_t(i)] = unit_rate(profile, foon.unit(tree.units[size_t(i)]));

  std::vector<int> order(static_cast<size_t>(n), 0);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (plan.rates[size_t(a)] != plan.rates[size_t(b)])
      return plan.rates[size_t(a)] < plan.rates[size_t(b)];
    return tree.units[size_t(a)] < tree.units[size_t(b)];
  });
  for (int i = 0; i < m; ++i) {
    int idx = order[size_t(i)];
    plan.assignment[size_t(idx)] = Executor::Human;
    plan.rates[size_t(idx)] = profile.assistant_rate;
  }
  plan.total_success = product_of_rates(plan.rates);
  return plan;
}

struct BestPlanResult {
  DelegationPlan primary;
  std::vector<DelegationPlan> co_optimal;  // all plans within tie tolerance
};

inline constexpr double kCoOptimalTolerance = 1e-12;

// Best plan at a fixed m over all eligible trees (those with N - 1 >= m).
// Co-optimal plans are all reported; the primary is the shortest tree, then
// the lowest lexicographic id sequence.
inline BestPlanResult best_plan(const UniversalFoon& foon,
                                const std::vector<TaskTree>& trees,
                                const RobotProfile& profile, int m) {
  std::vector<DelegationPlan> plans;
  for (const auto& tree : trees) {
    if (tree.units.empty() || int(tree.units.size()) - 1 < m) continue;
    plans.push_back(assign_human_steps(foon, tree, profile, m));
  }
  if (plans.empty())
    throw DelegationError("M exceeds all tree lengths (M=" + std::to_string(m) + ")");

  double best = 0.0;
  for (const auto& p : plans) best = std::max(best, p.total_success);

  BestPlanResult result;
  for (auto& p : plans)
    if (p.total_success >= best - kCoOptimalTolerance)
      result.co_optimal.push_back(std::move(p));

  std::sort(result.co_optimal.begin(), result.co_optimal.end(),
            [](const DelegationPlan& a, const DelegationPlan& b) {
              if (a.tree.units.size() != b.tree.units.size())
                return a.tree.units.size() < b.tree.units.size();
              return a.tree.unit_set() < b.tree.unit_set();
            });
  result.primary = result.co_optimal.front();
  return result;
}

// Largest m whose marginal improvement over m - 1 clears epsilon, or 0.
inline int optimal_m(const UniversalFoon& foon, const std::vector<TaskTree>& trees,
                     const RobotProfile& profile, double epsilon = 0.05) {
  if (trees.empty()) throw DelegationError("no trees to evaluate");
  if (!(epsilon > 0.0)) throw DelegationError("epsilon must be positive");
  int max_m = 0;
  for (const auto& tree : trees)
    max_m = std::max(max_m, int(tree.units.size()) - 1);

  int chosen = 0;
  double prev = best_plan(foon, trees, profile, 0).primary.total_success;
  for (int m = 1; m <= max_m; ++m) {
    double cur = best_plan(foon, trees, profile, m).primary.total_success;
    if (cur - prev >= epsilon) chosen = m;
    prev = cur;
  }
  return chosen;
}

struct SweepRow {
  int m = 0;
  bool present = false;  // some tree is still eligible at this m
  double best_success = 0.0;
  std::vector<int> best_tree_units;  // sorted unit ids
  bool tree_changed = false;         // best tree differs from row m - 1
  bool drop = false;                 // best success decreased from row m - 1
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

inline SweepReport sweep(const UniversalFoon& foon,
                         const std::vector<TaskTree>& trees,
                         const RobotProfile& profile, int max_m) {
  if (trees.empty()) throw DelegationError("no trees to evaluate");
  SweepReport report;
  const SweepRow* prev = nullptr;
  for (int m = 0; m <= max_m; ++m) {
    SweepRow row;
    row.m = m;
    try {
      auto best = best_plan(foon, trees, profile, m);
      row.present = true;
      row.best_success = best.primary.total_success;
      row.best_tree_units = best.primary.tree.unit_set();
      if (prev && prev->present) {
        row.tree_changed = row.best_tree_units != prev->best_tree_units;
        row.drop = row.best_success < prev->best_success;
      }
    } catch (const DelegationError&) {
      row.present = false;  // m exceeds every tree's N - 1
    }
    report.rows.push_back(std::move(row));
    prev = &report.rows.back();
  }
  return report;
}

// Plot-ready tabular form: one row per m, tab-separated, header first.
inline std::string sweep_table(const SweepReport& report) {
  std::ostringstream out;
  out << "m\tbest_success\tbest_tree_ids\tdrop\n";
  for (const auto& row : report.rows) {
    out << row.m << "\t";
    if (!row.present) {
      out << "-\t-\t-\n";
      continue;
    }
    out.precision(12);
    out << row.best_success << "\t";
    for (size_t i = 0; i < row.best_tree_units.size(); ++i) {
      if (i) out << ",";
      out << row.best_tree_units[i];
    }
    out << "\t" << (row.drop ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace foon
