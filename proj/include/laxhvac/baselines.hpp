#pragma once

#include "laxhvac/env.hpp"
#include "laxhvac/lp.hpp"
#include "laxhvac/rl.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace laxhvac {

/// Exact one-step map of a fleet, x' = A x + B u + g * x_out.
struct AffineStep {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::VectorXd g;
};

/// Recovers the affine map by probing Fleet::step with unit vectors.
AffineStep linearize(const Fleet& fleet);

/// Groups of units whose dynamics are coupled (a building's zones).
std::vector<std::vector<std::size_t>> coupled_blocks(const AffineStep& step);

struct MpcConfig {
    int horizon = 0;             ///< steps per solve; 0 means the rest of the episode
    bool receding = false;       ///< re-solve every step and apply the first action
    double band_penalty = 1e3;   ///< per degC-step outside the comfort band
    double energy_weight = 1.0;
    double deviation_weight = 1.0;
    LpOptions lp;

    void validate() const;
};

/// Cost of one temperature against its target and (shifted) comfort band.
double deviation_cost(double x, double target, double x_lo, double x_hi, const MpcConfig& cfg);

/// The cost MPC minimises, evaluated on any trace of the environment:
/// energy (price * sum |u| * dt) plus deviation cost of every recorded
/// temperature.
double trace_cost(std::span<const TraceRow> trace, const Fleet& fleet, const MpcConfig& cfg);

/// An MPC program for some units over `steps` steps from the environment's
/// current state.
struct MpcProgram {
    LinearProgram lp;
    std::vector<std::size_t> units;
    int steps = 0;

    /// Column of the heating / cooling part of unit `k` (index into `units`) at step `t`.
    int heat(std::size_t k, int t) const;
    int cool(std::size_t k, int t) const;
    /// Column of the temperature of unit `k` after step `t`.
    int temperature(std::size_t k, int t) const;
    /// Signed powers [step][k] from a solution vector.
    std::vector<std::vector<double>> powers(const std::vector<double>& x) const;
};

/// Builds the program over `horizon` steps for `units` (all units when
/// empty). Per unit and step: heating and cooling parts in [0, u_max], a
/// free temperature tied to the exact dynamics, and the deviation
/// x - target = p1 + p2 - q1 - q2 where p1, q1 stay inside the band and
/// p2, q2 carry the band penalty. When the fleet's upper power bound binds,
/// one row per step caps the total heating plus cooling.
MpcProgram build_mpc_lp(const Environment& env, int horizon, const MpcConfig& cfg,
                        std::vector<std::size_t> units = {});

struct MpcResult {
    std::vector<TraceRow> trace;
    Metrics metrics;
    double cost = 0.0;        ///< trace_cost of the realised trace
    double lp_objective = 0.0; ///< sum of planned objectives (first solve per block)
    int solves = 0;
    int iterations = 0;
};

/// Runs MPC for one episode starting at `offset`. Programs are split into
/// coupled blocks whenever the total power cap cannot bind.
MpcResult run_mpc(Environment& env, std::size_t offset, const MpcConfig& cfg);

/// Full-state view of the environment for a per-unit actor-critic: the state
/// is every unit's temperature, the outdoor temperature and the price; the
/// action is one signed power per unit; the reward penalises temperature
/// deviation and energy cost.
class CentralizedTask final : public rl::Task {
public:
    explicit CentralizedTask(Environment& env) : env_(env) {}

    std::size_t state_dim() const override { return env_.size() + 2; }
    Eigen::VectorXd action_lo() const override;
    Eigen::VectorXd action_hi() const override;
    std::size_t episode_starts() const override { return env_.episode_starts(); }
    Eigen::VectorXd reset(std::size_t offset) override;
    double step(const Eigen::VectorXd& action, Eigen::VectorXd& next) override;
    bool done() const override { return env_.done(); }
    const std::vector<TraceRow>& trace() const override { return env_.trace(); }
    double dt() const override { return env_.fleet().dt(); }

    static Eigen::VectorXd encode(const FleetState& s);
    /// -sum |x - target| - beta * price * sum |u|, on the pre-step state.
    static double reward(const FleetState& s, std::span<const double> u, const RewardConfig& cfg);

private:
    Environment& env_;
};

}  // namespace laxhvac
