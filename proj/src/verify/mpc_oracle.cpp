#include "laxhvac/verify/mpc_oracle.hpp"

#include <cmath>
#include <limits>

namespace laxhvac::verify {

DiscreteOptimum discrete_optimum(const Environment& env, std::size_t offset,
                                 std::span<const double> levels, const MpcConfig& cfg) {
    const auto n = env.size();
    const auto steps = static_cast<std::size_t>(env.config().episode_length);
    const std::size_t choices = n * steps;
    const double combos = std::pow(static_cast<double>(levels.size()), static_cast<double>(choices));
    if (levels.empty() || combos > 5e6) {
        throw PreconditionError("discrete_optimum: instance too large to enumerate");
    }

    DiscreteOptimum best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> digit(choices, 0);
    std::vector<std::vector<double>> powers(steps, std::vector<double>(n, 0.0));
    while (true) {
        for (std::size_t k = 0; k < choices; ++k) {
            powers[k / n][k % n] = levels[digit[k]];
        }
        Environment copy = env;
        copy.reset(offset);
        for (const auto& u : powers) {
            copy.step_units(u);
        }
        const double c = trace_cost(copy.trace(), copy.fleet(), cfg);
        ++best.evaluated;
        if (c < best.cost) {
            best.cost = c;
            best.powers = powers;
        }
        std::size_t k = 0;
        while (k < choices && ++digit[k] == levels.size()) {
            digit[k++] = 0;
        }
        if (k == choices) {
            break;
        }
    }
    return best;
}

}  // namespace laxhvac::verify
