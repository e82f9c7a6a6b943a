#include "laxhvac/baselines.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace laxhvac {

AffineStep linearize(const Fleet& fleet) {
    const std::size_t n = fleet.size();
    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<double> x(n, 0.0), u(n, 0.0);
    const auto base = fleet.step(x, u, 0.0);
    AffineStep out{Eigen::MatrixXd(ni, ni), Eigen::MatrixXd(ni, ni), Eigen::VectorXd(ni)};
    auto column = [&](const std::vector<double>& next, double scale, Eigen::Index j,
                      Eigen::MatrixXd& m) {
        for (std::size_t i = 0; i < n; ++i) {
            m(static_cast<Eigen::Index>(i), j) = (next[i] - base[i]) / scale;
        }
    };
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = 1.0;
        column(fleet.step(x, u, 0.0), 1.0, static_cast<Eigen::Index>(j), out.A);
        x[j] = 0.0;
        const double probe = fleet.u_max(j);
        u[j] = probe;
        column(fleet.step(x, u, 0.0), probe, static_cast<Eigen::Index>(j), out.B);
        u[j] = 0.0;
    }
    const auto drift = fleet.step(x, u, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.g(static_cast<Eigen::Index>(i)) = drift[i] - base[i];
    }
    return out;
}

std::vector<std::vector<std::size_t>> coupled_blocks(const AffineStep& step) {
    const auto n = static_cast<std::size_t>(step.A.rows());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            i = parent[i] = parent[parent[i]];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
            if (i != j && (step.A(r, c) != 0.0 || step.B(r, c) != 0.0)) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return blocks;
}

void MpcConfig::validate() const {
    if (horizon < 0) {
        throw ConfigError("mpc.horizon: must be >= 0");
    }
    if (!(band_penalty >= 0.0) || !(energy_weight >= 0.0) || !(deviation_weight >= 0.0)) {
        throw ConfigError("mpc: weights must be >= 0");
    }
}

double deviation_cost(double x, double target, double x_lo, double x_hi, const MpcConfig& cfg) {
    return cfg.deviation_weight * std::abs(x - target) +
           cfg.band_penalty * (std::max(0.0, x - x_hi) + std::max(0.0, x_lo - x));
}

namespace {

struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

Band band_of(const Fleet& fleet, std::size_t unit, std::span<const double> x, double x_out,
             double target) {
    const auto v = fleet.view(unit, x, x_out, target);
    return {v.params.x_lo, v.params.x_hi};
}

constexpr int kColumnsPerUnitStep = 7;  // h, c, x, p1, p2, q1, q2

}  // namespace

double trace_cost(std::span<const TraceRow> trace, const Fleet& fleet, const MpcConfig& cfg) {
    double total = 0.0;
    for (const auto& row : trace) {
        double used = 0.0;
        for (std::size_t i = 0; i < row.x.size(); ++i) {
            used += std::abs(row.u[i]);
            const auto b = band_of(fleet, i, row.x, row.x_out, row.target[i]);
            total += deviation_cost(row.x[i], row.target[i], b.lo, b.hi, cfg);
        }
        total += cfg.energy_weight * row.price * used * fleet.dt();
    }
    return total;
}

int MpcProgram::heat(std::size_t k, int t) const {
    return (t * static_cast<int>(units.size()) + static_cast<int>(k)) * kColumnsPerUnitStep;
}
int MpcProgram::cool(std::size_t k, int t) const { return heat(k, t) + 1; }
int MpcProgram::temperature(std::size_t k, int t) const { return heat(k, t) + 2; }

std::vector<std::vector<double>> MpcProgram::powers(const std::vector<double>& x) const {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(steps),
                                         std::vector<double>(units.size(), 0.0));
    for (int t = 0; t < steps; ++t) {
        for (std::size_t k = 0; k < units.size(); ++k) {
            out[static_cast<std::size_t>(t)][k] = x[static_cast<std::size_t>(heat(k, t))] -
                                                  x[static_cast<std::size_t>(cool(k, t))];
        }
    }
    return out;
}

MpcProgram build_mpc_lp(const Environment& env, int horizon, const MpcConfig& cfg,
                        std::vector<std::size_t> units) {
    cfg.validate();
    const auto& fleet = env.fleet();
    const auto& s = env.state();
    const int length = env.config().episode_length;
    if (horizon < 1 || s.t + horizon > length) {
        throw PreconditionError("build_mpc_lp: horizon must fit in the remaining episode");
    }
    if (units.empty()) {
        units.resize(fleet.size());
        std::iota(units.begin(), units.end(), std::size_t{0});
    }
    const auto step = linearize(fleet);
    std::vector<int> local(fleet.size(), -1);
    for (std::size_t k = 0; k < units.size(); ++k) {
        if (units[k] >= fleet.size()) {
            throw PreconditionError("build_mpc_lp: unit index out of range");
        }
        local[units[k]] = static_cast<int>(k);
    }
    for (std::size_t k = 0; k < units.size(); ++k) {
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            const auto r = static_cast<Eigen::Index>(units[k]), c = static_cast<Eigen::Index>(j);
            if (local[j] < 0 && (step.A(r, c) != 0.0 || step.B(r, c) != 0.0)) {
                throw PreconditionError("build_mpc_lp: units are coupled to units outside the set");
            }
        }
    }

    const auto bounds = env.bounds();
    const bool coupled = units.size() == fleet.size() &&
                         (bounds.hi < fleet.total_u_max() - 1e-12 || bounds.lo > 0.0);
    if (!coupled && units.size() != fleet.size() && bounds.hi < fleet.total_u_max() - 1e-12) {
        throw PreconditionError("build_mpc_lp: the power cap binds, so the fleet cannot be split");
    }

    MpcProgram prog;
    prog.units = units;
    prog.steps = horizon;
    auto& lp = prog.lp;
    const double dt = fleet.dt();

    for (const auto i : units) {
        const auto b = band_of(fleet, i, s.x, s.x_out, s.targets[i]);
        lp.offset += deviation_cost(s.x[i], s.targets[i], b.lo, b.hi, cfg);
    }
    for (int t = 0; t < horizon; ++t) {
        const auto exo = env.exogenous_at(s.t + t);
        const auto targets = env.targets_at(s.t + t + 1);
        const bool counted = s.t + t + 1 < length;
        const double dev = counted ? cfg.deviation_weight : 0.0;
        const double pen = counted ? cfg.deviation_weight + cfg.band_penalty : 0.0;
        const std::string tag = "_" + std::to_string(t);
        for (std::size_t k = 0; k < units.size(); ++k) {
            const auto i = units[k];
            const std::string u = std::to_string(i) + tag;
            const double energy = cfg.energy_weight * exo.price * dt;
            const double target = targets[i];
            const auto b = band_of(fleet, i, s.x, s.x_out, target);
            lp.add_variable("h" + u, 0.0, fleet.u_max(i), energy);
            lp.add_variable("c" + u, 0.0, fleet.u_max(i), energy);
            lp.add_variable("x" + u, -kInf, kInf, 0.0);
            lp.add_variable("p" + u, 0.0, b.hi - target, dev);
            lp.add_variable("pp" + u, 0.0, kInf, pen);
            lp.add_variable("q" + u, 0.0, target - b.lo, dev);
            lp.add_variable("qq" + u, 0.0, kInf, pen);
        }
        for (std::size_t k = 0; k < units.size(); ++k) {
            const auto i = units[k];
            const auto ri = static_cast<Eigen::Index>(i);
            const std::string u = std::to_string(i) + tag;
            double rhs = step.g(ri) * exo.x_out;
            const int dyn = lp.add_row("dyn" + u, 0.0, 0.0);
            lp.add_entry(dyn, prog.temperature(k, t), 1.0);
            for (std::size_t m = 0; m < units.size(); ++m) {
                const auto j = static_cast<Eigen::Index>(units[m]);
                const double a = step.A(ri, j);
                const double bu = step.B(ri, j);
                if (a != 0.0) {
                    if (t == 0) {
                        rhs += a * s.x[units[m]];
                    } else {
                        lp.add_entry(dyn, prog.temperature(m, t - 1), -a);
                    }
                }
                if (bu != 0.0) {
                    lp.add_entry(dyn, prog.heat(m, t), -bu);
                    lp.add_entry(dyn, prog.cool(m, t), bu);
                }
            }
            lp.row_lo.back() = lp.row_hi.back() = rhs;

            const int devrow = lp.add_row("dev" + u, targets[i], targets[i]);
            const int x = prog.temperature(k, t);
            lp.add_entry(devrow, x, 1.0);
            lp.add_entry(devrow, x + 1, -1.0);
            lp.add_entry(devrow, x + 2, -1.0);
            lp.add_entry(devrow, x + 3, 1.0);
            lp.add_entry(devrow, x + 4, 1.0);
        }
        if (coupled) {
            const int cap = lp.add_row("cap" + tag, bounds.lo, bounds.hi);
            for (std::size_t k = 0; k < units.size(); ++k) {
                lp.add_entry(cap, prog.heat(k, t), 1.0);
                lp.add_entry(cap, prog.cool(k, t), 1.0);
            }
        }
    }
    return prog;
}

MpcResult run_mpc(Environment& env, std::size_t offset, const MpcConfig& cfg) {
    cfg.validate();
    env.reset(offset);
    const auto& fleet = env.fleet();
    const int length = env.config().episode_length;
    const auto bounds = env.bounds();
    const bool split = bounds.hi >= fleet.total_u_max() - 1e-12 && bounds.lo <= 0.0;
    std::vector<std::vector<std::size_t>> blocks;
    if (split) {
        blocks = coupled_blocks(linearize(fleet));
    } else {
        blocks.emplace_back(fleet.size());
        std::iota(blocks[0].begin(), blocks[0].end(), std::size_t{0});
    }

    MpcResult result;
    bool first = true;
    while (!env.done()) {
        const int t = env.state().t;
        const int remaining = length - t;
        const int horizon = cfg.horizon > 0 ? std::min(cfg.horizon, remaining) : remaining;
        const int apply = cfg.receding ? 1 : horizon;
        std::vector<std::vector<double>> plan(static_cast<std::size_t>(horizon),
                                              std::vector<double>(fleet.size(), 0.0));
        for (const auto& block : blocks) {
            const auto prog = build_mpc_lp(env, horizon, cfg, block);
            const auto sol = solve_lp(prog.lp, cfg.lp);
            ++result.solves;
            result.iterations += sol.iterations;
            if (first) {
                result.lp_objective += sol.objective;
            }
            const auto u = prog.powers(sol.x);
            for (int k = 0; k < horizon; ++k) {
                for (std::size_t m = 0; m < block.size(); ++m) {
                    plan[static_cast<std::size_t>(k)][block[m]] = u[static_cast<std::size_t>(k)][m];
                }
            }
        }
        first = false;
        for (int k = 0; k < apply; ++k) {
            env.step_units(plan[static_cast<std::size_t>(k)]);
        }
    }
    result.trace = env.trace();
    result.metrics = metrics(result.trace, fleet.dt());
    result.cost = trace_cost(result.trace, fleet, cfg);
    return result;
}

// ---------------------------------------------------------------------------
// CentralizedTask

Eigen::VectorXd CentralizedTask::action_lo() const { return -action_hi(); }

Eigen::VectorXd CentralizedTask::action_hi() const {
    Eigen::VectorXd hi(static_cast<Eigen::Index>(env_.size()));
    for (std::size_t i = 0; i < env_.size(); ++i) {
        hi(static_cast<Eigen::Index>(i)) = env_.fleet().u_max(i);
    }
    return hi;
}

Eigen::VectorXd CentralizedTask::encode(const FleetState& s) {
    const auto n = static_cast<Eigen::Index>(s.x.size());
    Eigen::VectorXd v(n + 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = s.x[static_cast<std::size_t>(i)];
    }
    v(n) = s.x_out;
    v(n + 1) = s.price;
    return v;
}

double CentralizedTask::reward(const FleetState& s, std::span<const double> u,
                               const RewardConfig& cfg) {
    double deviation = 0.0;
    double used = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        deviation += std::abs(s.x[i] - s.targets[i]);
        used += std::abs(u[i]);
    }
    return -deviation - cfg.beta * s.price * used;
}

Eigen::VectorXd CentralizedTask::reset(std::size_t offset) {
    return encode(env_.reset(offset));
}

double CentralizedTask::step(const Eigen::VectorXd& action, Eigen::VectorXd& next) {
    if (static_cast<std::size_t>(action.size()) != env_.size()) {
        throw PreconditionError("CentralizedTask::step: one power per unit expected");
    }
    const FleetState before = env_.state();
    const auto out = env_.step_units(std::span<const double>(action.data(), env_.size()));
    next = encode(out.next);
    return reward(before, out.u, env_.config().reward);
}

}  // namespace laxhvac
