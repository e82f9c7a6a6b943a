#pragma once

// End-to-end runs on a Scenario: training, evaluation and the comparison
// table shared by the command-line tool and the acceptance checks.

#include "laxhvac/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace laxhvac {

enum class Method { Proposed, Centralized, Mpc };

const char* to_string(Method m) noexcept;
Method parse_method(const std::string& name);

/// Training data: the series up to the first evaluation offset when that
/// leaves at least one episode, otherwise the whole series.
ExogenousSeries training_series(const Scenario& s, const ExogenousSeries& exo);

/// Trains the proposed (aggregated state, total power) or the centralized
/// (full state, per-unit power) agent.
rl::TrainResult train_agent(const Scenario& s, const ExogenousSeries& exo, Method m);

struct Evaluation {
    Method method = Method::Proposed;
    std::size_t offset = 0;
    Metrics metrics;
    double reward = 0.0;  ///< episode reward of the method's own task (0 for MPC)
    std::vector<TraceRow> trace;
};

Evaluation evaluate_agent(const Scenario& s, const ExogenousSeries& exo, Method m,
                          const rl::Ddpg& agent, std::size_t offset);
Evaluation evaluate_constant_power(const Scenario& s, const ExogenousSeries& exo, double power,
                                   std::size_t offset);
Evaluation evaluate_mpc(const Scenario& s, const ExogenousSeries& exo, std::size_t offset);

/// Mean ATD and TEC per method over the scenario's evaluation offsets.
struct ComparisonRow {
    Method method = Method::Proposed;
    double atd = 0.0;
    double tec = 0.0;
};

/// One method trained (if it learns) and evaluated at every evaluation
/// offset of the scenario.
struct MethodRun {
    Method method = Method::Proposed;
    std::vector<rl::EpisodeStats> curve;  ///< empty for MPC
    std::optional<rl::Ddpg> agent;
    std::vector<Evaluation> evaluations;
    Metrics mean;
    double train_seconds = 0.0;
};

MethodRun run_method(const Scenario& s, const ExogenousSeries& exo, Method m);
ComparisonRow comparison_row(const MethodRun& run);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// First episode from which the trailing moving average (window `window`)
/// of the reward stays within `tolerance` * |plateau| of the plateau, the
/// mean of the last `window` rewards. Returns the curve length when never.
int convergence_episode(const std::vector<rl::EpisodeStats>& curve, int window = 10,
                        double tolerance = 0.05);

}  // namespace laxhvac
