#pragma once

// Exhaustive reference search for small scheduling instances. Independent of
// the dispatch rule: it only knows the idealised job model.

#include "laxhvac/dispatch.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace laxhvac::verify {

/// A small instance on a power grid of `quantum` kW (half of u_max).
struct GridInstance {
    std::vector<AbstractRequestFleet::Job> jobs;  ///< all with identical u_max
    int horizon = 0;                              ///< steps 0 .. horizon-1
    int max_quanta = 0;                           ///< P_hi in quanta
    double quantum = 0.5;
    int quanta_per_unit = 2;                      ///< u_max / quantum
};

GridInstance random_grid_instance(std::mt19937_64& rng, int max_units, int max_steps,
                                  std::uint64_t leaf_budget, int quanta_per_unit = 2);

/// True when some per-unit split of `totals` (in quanta) completes every job.
bool totals_admit_split(const GridInstance& inst, const std::vector<int>& totals);

/// Every total schedule on the grid within [0, P_hi] that admits a feasible
/// per-unit split.
std::vector<std::vector<int>> feasible_total_schedules(const GridInstance& inst);

struct Prop3Result {
    int instances = 0;
    int instances_with_feasible = 0;
    long schedules_checked = 0;
    long counterexamples = 0;
};

/// Draws `count` instances and checks that LLF recovery of every feasible
/// total schedule passes check_feasible.
Prop3Result llf_recovery_search(int count, std::uint64_t seed, int max_units = 4,
                                int max_steps = 8, int quanta_per_unit = 2);

}  // namespace laxhvac::verify
