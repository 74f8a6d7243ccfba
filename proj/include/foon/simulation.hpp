#pragma once

#include <cstdint>

#include "foon/collaboration.hpp"

// Monte Carlo execution of a delegation plan. Each unit is an independent
// Bernoulli trial at its effective rate; the first failed unit aborts the
// trial. The random stream is counter-based and keyed by (seed, trial, step),
// so results are reproducible regardless of execution order.

namespace foon {

struct SimulationResult {
  uint64_t trials = 0;
  uint64_t successes = 0;
  double empirical_rate = 0.0;
  std::map<int, uint64_t> per_unit_failure_counts;
  uint64_t seed = 0;
  double analytic_rate = 0.0;
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) for a (seed, trial, step) counter.
inline double counter_uniform(uint64_t seed, uint64_t trial, uint64_t step) {
  uint64_t h = splitmix64(splitmix64(splitmix64(seed) + trial) + step);
  return double(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline SimulationResult simulate(const DelegationPlan& plan, uint64_t trials,
                                 uint64_t seed) {
  if (trials < 1) throw FoonError("simulate: trials must be >= 1");
  SimulationResult result;
  result.trials = trials;
  result.seed = seed;
  result.analytic_rate = plan.total_success;

  const auto& units = plan.tree.units;
  for (uint64_t t = 0; t < trials; ++t) {
    bool ok = true;
    for (size_t i = 0; i < units.size(); ++i) {
      double u = detail::counter_uniform(seed, t, uint64_t(i));
      if (!(u < plan.rates[i])) {
        result.per_unit_failure_counts[units[i]] += 1;
        ok = false;
        break;
      }
    }
    if (ok) result.successes += 1;
  }
  result.empirical_rate = double(result.successes) / double(trials);
  return result;
}

// Units ranked by failure count descending, ties by lowest id.
inline std::vector<std::pair<int, uint64_t>> failure_report(
    const SimulationResult& result) {
  std::vector<std::pair<int, uint64_t>> ranked(
      result.per_unit_failure_counts.begin(),
      result.per_unit_failure_counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

}  // namespace foon
