#pragma once

// Exhaustive search over discretised per-unit powers, for tiny MPC instances.

#include "laxhvac/baselines.hpp"

#include <span>

namespace laxhvac::verify {

struct DiscreteOptimum {
    double cost = 0.0;
    std::vector<std::vector<double>> powers;  ///< [step][unit]
    long evaluated = 0;
};

/// Tries every sequence of per-unit powers drawn from `levels` (kW) over a
/// whole episode starting at `offset` and returns the cheapest by
/// trace_cost. The environment is copied, not modified.
DiscreteOptimum discrete_optimum(const Environment& env, std::size_t offset,
                                 std::span<const double> levels, const MpcConfig& cfg);

}  // namespace laxhvac::verify
