#include "laxhvac/verify/acceptance.hpp"

#include "laxhvac/baselines.hpp"
#include "laxhvac/dispatch.hpp"
#include "laxhvac/error.hpp"
#include "laxhvac/laxity.hpp"
#include "laxhvac/lp.hpp"
#include "laxhvac/pipeline.hpp"
#include "laxhvac/scenario.hpp"
#include "laxhvac/verify/gradient_check.hpp"
#include "laxhvac/verify/lp_oracle.hpp"
#include "laxhvac/verify/mpc_oracle.hpp"
#include "laxhvac/verify/schedule_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace laxhvac::verify {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

void note(const AcceptanceOptions& opts, const std::string& msg) {
    if (opts.log) {
        opts.log(msg);
    }
}

// ---------------------------------------------------------------------------
// 1. Two-request golden table

CriterionResult table_one() {
    CriterionResult r{1, "two-request golden replay (LLF columns, swap at step 3)", false, {}, 0.0, {}};
    // Both requests need three full-power steps of 5 kW; deadlines at steps
    // 6 and 5; total budget per step 10, 0, 5, 10, 5, 0.
    AbstractRequestFleet fleet({{1, 6, 3.0, 5.0}, {1, 5, 3.0, 5.0}}, 1);
    const std::vector<double> totals = {10, 0, 5, 10, 5, 0};
    const auto schedule = llf_recover(totals, fleet);
    const auto report = check_feasible(schedule, {0.0, 10.0}, fleet);

    // Golden LLF columns, steps 1..6.
    const double e[2][6] = {{3, 2, 2, 2, 1, 0}, {3, 2, 2, 1, 0, 0}};
    const double rem[2][6] = {{5, 4, 3, 2, 1, 0}, {4, 3, 2, 1, 0, 0}};
    const double lax[2][6] = {{2, 2, 1, 0, 0, 0}, {2, 1, 0, 0, 0, 0}};
    const double u[2][6] = {{5, 0, 0, 5, 5, 0}, {5, 0, 5, 5, 0, 0}};

    int matched = 0;
    int compared = 0;
    std::string mismatches;
    std::string excluded;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < 6; ++k) {
            const auto& s = report.trace[k][i];
            const double got[4] = {s.min_time, s.remaining, s.laxity, schedule.per_unit[k][i]};
            const double want[4] = {e[i][k], rem[i][k], lax[i][k], u[i][k]};
            const char* names[4] = {"e", "t_e-t", "l", "u"};
            for (int c = 0; c < 4; ++c) {
                // Request 2's golden laxity at step 1 contradicts its own
                // e = 3 and t_e - t = 4 in the same column.
                if (i == 1 && k == 0 && c == 2) {
                    excluded = "golden l2(1)=2 disagrees with e2-(t_e-t)=" + fmt(got[c]) + ", excluded";
                    continue;
                }
                ++compared;
                if (got[c] == want[c]) {
                    ++matched;
                } else {
                    mismatches += std::string(" ") + names[c] + std::to_string(i + 1) + "(" +
                                  std::to_string(k + 1) + ")=" + fmt(got[c]);
                }
            }
        }
    }

    AbstractRequestFleet swapped_fleet({{1, 6, 3.0, 5.0}, {1, 5, 3.0, 5.0}}, 1);
    PowerSchedule swapped;
    swapped.total = totals;
    swapped.per_unit = {{5, 5}, {0, 0}, {5, 0}, {5, 5}, {0, 0}, {0, 0}};
    const auto bad = check_feasible(swapped, {0.0, 10.0}, swapped_fleet);
    const double l2_step4 = bad.trace[3][1].laxity;

    r.pass = report.feasible && matched == compared && !bad.feasible && l2_step4 == -1.0;
    r.detail = std::to_string(matched) + "/" + std::to_string(compared) + " LLF cells exact; " +
               excluded + "; swap gives l2(4)=" + fmt(l2_step4) + (mismatches.empty() ? "" : ";" + mismatches);
    return r;
}

// ---------------------------------------------------------------------------
// 2. Time-to-target inversion

CriterionResult zeta_round_trip(std::uint64_t seed) {
    CriterionResult r{2, "zeta round trip, 1000 draws, k in 1..5, tol 1e-9", false, {}, 0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int checks = 0;
    int draws = 0;
    while (draws < 1000) {
        ZoneParams p;
        p.a = 0.05 + 0.45 * unit(rng);
        p.u_max = 2.0 + 8.0 * unit(rng);
        p.dt = unit(rng) < 0.5 ? 1.0 : 0.5;
        const double x_out = -5.0 + 40.0 * unit(rng);
        const double x = 12.0 + 18.0 * unit(rng);
        // The unit can overpower the envelope in both directions.
        p.b = (std::abs(x_out - x) + 1.0 + 10.0 * unit(rng)) * p.a / p.u_max;
        const double u = unit(rng) < 0.5 ? p.u_max : -p.u_max;
        if (!(p.b * p.u_max > p.a * std::abs(x_out - x))) {
            continue;
        }
        ++draws;
        double reached = x;
        for (int k = 1; k <= 5; ++k) {
            reached = step_zone(reached, u, x_out, p);
            const double back = zeta(reached, x, u, x_out, p);
            worst = std::max(worst, std::abs(back - k));
            ++checks;
        }
    }
    r.pass = worst <= 1e-9;
    r.detail = std::to_string(checks) + " inversions, max |zeta - k| = " + fmt(worst, 3);
    return r;
}

// ---------------------------------------------------------------------------
// 3. Laxity monotonicity

CriterionResult laxity_monotone(std::uint64_t seed) {
    CriterionResult r{3, "laxity non-increasing on 1000 in-band trajectories, flat at max power", false, {},
                      0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_rise = -kLaxitySentinel;
    double worst_flat = 0.0;
    int steps = 0;
    int served = 0;
    for (int traj = 0; traj < 1000; ++traj) {
        ZoneParams p;
        p.a = 0.05 + 0.25 * unit(rng);
        p.u_max = 5.0;
        p.dt = 0.25;
        const double x_out = -5.0 + 35.0 * unit(rng);
        p.b = (std::max(std::abs(x_out - p.x_lo), std::abs(x_out - p.x_hi)) + 1.0 + 5.0 * unit(rng)) *
              p.a / p.u_max;
        double x = p.x_lo + (p.x_hi - p.x_lo) * unit(rng);
        const bool at_max = traj % 2 == 0;
        Request req;
        req.t_end = 200;
        double before = laxity(req, 0, x, x_out, p);
        for (int t = 0; t < 40; ++t) {
            const double toward = x < p.x_target ? p.u_max : -p.u_max;
            const double u = at_max ? toward : (1.3 * unit(rng) - 0.3) * toward;
            const double next = step_zone(x, u, x_out, p);
            const bool crossed = (x - p.x_target) * (next - p.x_target) <= 0.0;
            if (crossed || next < p.x_lo || next > p.x_hi) {
                break;
            }
            const double after = laxity(req, t + 1, next, x_out, p);
            worst_rise = std::max(worst_rise, after - before);
            if (at_max) {
                worst_flat = std::max(worst_flat, std::abs(after - before));
                ++served;
            }
            ++steps;
            before = after;
            x = next;
        }
    }
    r.pass = worst_rise <= 1e-9 && worst_flat <= 1e-9 && steps > 0 && served > 0;
    r.detail = std::to_string(steps) + " steps (" + std::to_string(served) +
               " at max power); max rise " + fmt(worst_rise, 3) + ", max |change| at max " +
               fmt(worst_flat, 3);
    return r;
}

// ---------------------------------------------------------------------------
// 4. LLF recovers every feasible total schedule

CriterionResult llf_recovery(std::uint64_t seed) {
    CriterionResult r{4, "LLF recovery of every feasible total schedule (200 instances, half-u_max grid)",
                      false, {}, 0.0, {}};
    const auto res = llf_recovery_search(200, seed, 4, 8, 2);
    r.pass = res.instances >= 200 && res.counterexamples == 0;
    r.detail = std::to_string(res.instances) + " instances (" + std::to_string(res.instances_with_feasible) +
               " with a feasible schedule), " + std::to_string(res.schedules_checked) +
               " feasible total schedules, " + std::to_string(res.counterexamples) + " counterexamples";
    return r;
}

// ---------------------------------------------------------------------------
// 5. Gradients

CriterionResult gradients(std::uint64_t seed) {
    CriterionResult r{5, "actor and critic gradients vs central differences, 50 nets, rel err <= 1e-4",
                      false, {}, 0.0, {}};
    double critic = 0.0;
    double actor = 0.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const auto g = random_gradient_check(seed + k);
        critic = std::max(critic, g.critic_error);
        actor = std::max(actor, g.actor_error);
    }
    r.pass = critic <= 1e-4 && actor <= 1e-4;
    r.detail = "max relative error critic " + fmt(critic, 3) + ", actor " + fmt(actor, 3);
    return r;
}

// ---------------------------------------------------------------------------
// 6. LP solver and MPC relaxation

CriterionResult lp_checks(std::uint64_t seed) {
    CriterionResult r{6, "simplex vs vertex enumeration (100 LPs, 1e-8); MPC LP <= discrete optimum", false,
                      {}, 0.0, {}};
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    int solved = 0;
    for (int k = 0; k < 100; ++k) {
        const auto lp = random_tiny_lp(rng);
        const auto ref = vertex_enumeration_optimum(lp);
        const auto sol = solve_lp(lp);
        if (ref) {
            worst = std::max(worst, std::abs(sol.objective - *ref));
            ++solved;
        } else {
            worst = kInf;
        }
    }

    // One unit, four steps, heating levels {0, u_max/2, u_max}.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    EnvConfig cfg;
    cfg.episode_length = 4;
    ZoneParams z;
    z.a = 0.1;
    z.b = 0.5;
    z.u_max = 6.0;
    cfg.fleet.zones.push_back(z);
    cfg.x0.push_back(20.0);
    ExogenousSeries exo;
    for (int t = 0; t <= 4; ++t) {
        exo.price.push_back(0.05 + 0.3 * unit(rng));
        exo.x_out.push_back(4.0 + 8.0 * unit(rng));
    }
    Environment env(cfg, exo);
    MpcConfig mc;
    const std::vector<double> levels{0.0, 0.5 * z.u_max, z.u_max};
    const auto discrete = discrete_optimum(env, 0, levels, mc);
    env.reset(0);
    const auto relaxed = solve_lp(build_mpc_lp(env, 4, mc).lp);

    r.pass = solved == 100 && worst <= 1e-8 && relaxed.objective >= -1e-12 &&
             relaxed.objective <= discrete.cost;
    r.detail = std::to_string(solved) + "/100 LPs, max |diff| " + fmt(worst, 3) + "; MPC LP " +
               fmt(relaxed.objective, 8) + " <= discrete " + fmt(discrete.cost, 8) + " (" +
               std::to_string(discrete.evaluated) + " sequences)";
    return r;
}

// ---------------------------------------------------------------------------
// 7. Method comparison

Scenario comparison_scenario(const AcceptanceOptions& opts) {
    auto s = preset(opts.preset);
    if (opts.episodes > 0) {
        s.train.episodes = opts.episodes;
        s.centralized.episodes = opts.episodes;
    }
    return s;
}

CriterionResult comparison(const AcceptanceOptions& opts) {
    CriterionResult r{7, "proposed vs centralized vs MPC on the 10-unit scenario", false, {}, 0.0, {}};
    auto s = comparison_scenario(opts);
    const auto exo = s.load_exogenous();
    const auto mpc = run_method(s, exo, Method::Mpc);

    Metrics prop;
    Metrics cent;
    double conv_prop = 0.0;
    double conv_cent = 0.0;
    double slowest = 0.0;
    const auto n = static_cast<double>(opts.comparison_seeds.size());
    for (const auto seed : opts.comparison_seeds) {
        s.train.seed = seed;
        s.centralized.seed = seed;
        const auto p = run_method(s, exo, Method::Proposed);
        const auto c = run_method(s, exo, Method::Centralized);
        const int cp = convergence_episode(p.curve);
        const int cc = convergence_episode(c.curve);
        note(opts, "seed " + std::to_string(seed) + ": proposed ATD " + fmt(p.mean.atd) + " TEC " +
                       fmt(p.mean.tec) + " conv " + std::to_string(cp) + " (" + fmt(p.train_seconds, 3) +
                       " s); centralized ATD " + fmt(c.mean.atd) + " TEC " + fmt(c.mean.tec) + " conv " +
                       std::to_string(cc) + " (" + fmt(c.train_seconds, 3) + " s)");
        prop.atd += p.mean.atd / n;
        prop.tec += p.mean.tec / n;
        cent.atd += c.mean.atd / n;
        cent.tec += c.mean.tec / n;
        conv_prop += cp / n;
        conv_cent += cc / n;
        slowest = std::max({slowest, p.train_seconds, c.train_seconds});
    }

    // Diagnostic only: the same MPC with energy weighted 20x, which lands
    // near the proposed agent's ATD. The verdict uses unit weights.
    auto heavy = s;
    heavy.mpc.energy_weight = 20.0;
    const auto mpc20 = run_method(heavy, exo, Method::Mpc);

    const bool a = prop.tec < cent.tec && prop.atd <= cent.atd + 0.1;
    const bool b = mpc.mean.tec <= prop.tec;
    const bool c = conv_prop < conv_cent;
    const bool budget = slowest <= 30.0 * 60.0;
    r.pass = a && b && c && budget;
    for (const auto& [label, ok] : {std::pair{"a", a}, {"b", b}, {"c", c}, {"budget", budget}}) {
        if (!ok) {
            r.failed_parts.push_back(label);
        }
    }
    auto flag = [](bool ok) { return ok ? "ok" : "FAIL"; };
    r.detail = "(a) " + std::string(flag(a)) + ": proposed ATD " + fmt(prop.atd) + " TEC " + fmt(prop.tec) +
               " vs centralized ATD " + fmt(cent.atd) + " TEC " + fmt(cent.tec) + "; (b) " + flag(b) +
               ": MPC TEC " + fmt(mpc.mean.tec) + " (ATD " + fmt(mpc.mean.atd) + ") vs proposed " +
               fmt(prop.tec) + " [diagnostic: energy weight 20 gives ATD " + fmt(mpc20.mean.atd) +
               " TEC " + fmt(mpc20.mean.tec) + "]; (c) " + flag(c) + ": convergence episode " + fmt(conv_prop, 3) +
               " vs " + fmt(conv_cent, 3) + "; slowest training " + fmt(slowest, 3) + " s (" +
               flag(budget) + "), mean over " + std::to_string(opts.comparison_seeds.size()) + " seeds";
    return r;
}

// ---------------------------------------------------------------------------
// 8. The reward sees only (price, aggregated laxity)

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

CriterionResult abstraction(const AcceptanceOptions& opts) {
    CriterionResult r{8, "states with equal (price, L) give bit-identical rewards, 1000 pairs", false, {},
                      0.0, {}};
    const auto s = preset(opts.preset);
    Environment env(s.env_config(), s.load_exogenous());
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double hi = env.bounds().hi;

    std::vector<FleetState> states;
    while (states.size() < 1000) {
        env.reset(std::uniform_int_distribution<std::size_t>(0, env.episode_starts() - 1)(rng));
        while (!env.done() && states.size() < 1000) {
            states.push_back(env.state());
            env.step(hi * unit(rng));
        }
    }

    int identical = 0;
    for (const auto& a : states) {
        FleetState b = a;
        std::vector<std::size_t> order(a.x.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t k = 0; k < order.size(); ++k) {
            b.x[k] = a.x[order[k]];
            b.targets[k] = a.targets[order[k]];
            b.requests[k] = a.requests[order[k]];
        }
        // An extra unit whose request has not started contributes nothing.
        Request idle;
        idle.laxity = kLaxitySentinel;
        b.x.push_back(30.0 * unit(rng));
        b.targets.push_back(21.0);
        b.requests.push_back(idle);

        const double power = hi * unit(rng);
        const auto sa = rl::AbstractTask::encode(abstract(a));
        const auto sb = rl::AbstractTask::encode(abstract(b));
        bool same = sa.size() == sb.size();
        for (Eigen::Index i = 0; same && i < sa.size(); ++i) {
            same = bits(sa(i)) == bits(sb(i));
        }
        same = same && bits(reward(a, power, s.reward)) == bits(reward(b, power, s.reward));
        identical += same ? 1 : 0;
    }
    r.pass = identical == 1000;
    r.detail = std::to_string(identical) + "/1000 pairs bit-identical (permuted units plus an idle unit)";
    return r;
}

// ---------------------------------------------------------------------------
// 9. Seeded training is reproducible

std::string curve_csv(const Scenario& s, const ExogenousSeries& exo, Method m) {
    std::ostringstream out;
    rl::write_curve_csv(out, train_agent(s, exo, m).curve);
    return out.str();
}

CriterionResult determinism(const AcceptanceOptions& opts) {
    CriterionResult r{9, "two seeded training runs give identical learning-curve CSVs", false, {}, 0.0, {}};
    auto s = comparison_scenario(opts);
    const auto exo = s.load_exogenous();
    const auto p1 = curve_csv(s, exo, Method::Proposed);
    const auto p2 = curve_csv(s, exo, Method::Proposed);
    s.centralized.episodes = std::min(s.centralized.episodes, 20);
    const auto c1 = curve_csv(s, exo, Method::Centralized);
    const auto c2 = curve_csv(s, exo, Method::Centralized);
    r.pass = p1 == p2 && c1 == c2 && !p1.empty();
    r.detail = "proposed " + std::to_string(s.train.episodes) + " episodes " +
               (p1 == p2 ? "identical" : "DIFFER") + ", centralized " +
               std::to_string(s.centralized.episodes) + " episodes " + (c1 == c2 ? "identical" : "DIFFER") +
               " (" + std::to_string(p1.size() + c1.size()) + " bytes)";
    return r;
}

}  // namespace

bool matches_expected_failure(const CriterionResult& r, const std::string& spec) {
    std::size_t digits = 0;
    while (digits < spec.size() && std::isdigit(static_cast<unsigned char>(spec[digits]))) {
        ++digits;
    }
    if (digits == 0 || std::stoi(spec.substr(0, digits)) != r.id || r.pass) {
        return false;
    }
    const auto part = spec.substr(digits);
    return part.empty() || (r.failed_parts.size() == 1 && r.failed_parts.front() == part);
}

std::vector<int> criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9}; }

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = table_one(); break;
            case 2: r = zeta_round_trip(opts.seed); break;
            case 3: r = laxity_monotone(opts.seed); break;
            case 4: r = llf_recovery(opts.seed); break;
            case 5: r = gradients(opts.seed); break;
            case 6: r = lp_checks(opts.seed); break;
            case 7: r = comparison(opts); break;
            case 8: r = abstraction(opts); break;
            case 9: r = determinism(opts); break;
            default: throw PreconditionError("no acceptance criterion " + std::to_string(id));
        }
    } catch (const PreconditionError&) {
        throw;
    } catch (const std::exception& e) {
        r.id = id;
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = since(start);
    // Runtime limits.
    const double limit = id == 1 ? 1.0 : id == 2 ? 5.0 : id == 4 ? 60.0 : 0.0;
    if (limit > 0.0) {
        r.detail += "; " + fmt(r.seconds, 3) + " s (limit " + fmt(limit) + " s)";
        if (r.seconds >= limit) {
            r.pass = false;
        }
    }
    return r;
}

}  // namespace laxhvac::verify
