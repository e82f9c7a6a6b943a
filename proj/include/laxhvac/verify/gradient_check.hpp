#pragma once

// Central finite differences against the analytic backpropagation.

#include "laxhvac/rl.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace laxhvac::verify {

Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h = 1e-6);

/// ||a - b|| / max(||a||, ||b||), or 0 when both vanish.
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct GradientReport {
    double critic_error = 0.0;
    double actor_error = 0.0;
};

/// Builds a small random agent (random widths, weights of order one, a
/// warmed-up normaliser) and a random batch, then compares the critic-loss
/// and actor-objective gradients with finite differences.
GradientReport random_gradient_check(std::uint64_t seed);

}  // namespace laxhvac::verify
