#pragma once

// Brute-force reference for tiny linear programs.

#include "laxhvac/lp.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace laxhvac::verify {

/// A random LP with finite variable bounds and a mix of one-sided, ranged
/// and equality rows, built around a random point so it is always feasible.
LinearProgram random_tiny_lp(std::mt19937_64& rng, int max_vars = 6, int max_rows = 6);

/// Minimum over all basic feasible points: every choice of n active bound or
/// row constraints with a nonsingular system whose solution is feasible.
/// Empty when no vertex is feasible. Needs finite variable bounds.
std::optional<double> vertex_enumeration_optimum(const LinearProgram& lp, double tol = 1e-9);

}  // namespace laxhvac::verify
