#include "laxhvac/baselines.hpp"
#include "laxhvac/error.hpp"
#include "laxhvac/verify/mpc_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace laxhvac;

namespace {

ZoneParams zone(double a = 0.1, double b = 0.5, double u_max = 6.0) {
    ZoneParams p;
    p.a = a;
    p.b = b;
    p.u_max = u_max;
    return p;
}

BuildingParams building() {
    BuildingParams b;
    b.zones.assign(3, BuildingZone{2.0, 2.5, 3.0, 19.0, 23.0, 21.0, 8.0});
    b.coupling = Eigen::MatrixXd::Zero(3, 3);
    b.coupling(0, 1) = b.coupling(1, 0) = 2.0;
    b.coupling(1, 2) = b.coupling(2, 1) = 2.0;
    return b;
}

ExogenousSeries series(std::vector<double> price, std::vector<double> x_out) {
    ExogenousSeries s;
    s.price = std::move(price);
    s.x_out = std::move(x_out);
    return s;
}

Environment random_env(std::mt19937_64& rng, int units, int steps) {
    std::uniform_real_distribution<double> ua(0.05, 0.1), ux0(17.0, 25.0), uo(4.0, 28.0),
        up(0.02, 0.4);
    EnvConfig cfg;
    cfg.episode_length = steps;
    for (int i = 0; i < units; ++i) {
        cfg.fleet.zones.push_back(zone(ua(rng)));
        cfg.x0.push_back(ux0(rng));
    }
    std::vector<double> price, x_out;
    for (int t = 0; t <= steps; ++t) {
        price.push_back(up(rng));
        x_out.push_back(uo(rng));
    }
    return Environment(cfg, series(price, x_out));
}

double zero_cost(Environment env, const MpcConfig& cfg) {
    env.reset(0);
    std::vector<double> u(env.size(), 0.0);
    while (!env.done()) {
        env.step_units(u);
    }
    return trace_cost(env.trace(), env.fleet(), cfg);
}

}  // namespace

TEST_CASE("linearize reproduces Fleet::step") {
    FleetSpec spec;
    spec.zones = {zone(), zone(0.2, 0.4, 5.0)};
    spec.buildings = {building()};
    Fleet fleet(spec);
    const auto m = linearize(fleet);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(10.0, 30.0), uu(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> x, u;
        Eigen::VectorXd xv(5), uv(5);
        for (std::size_t i = 0; i < 5; ++i) {
            x.push_back(ux(rng));
            u.push_back(uu(rng) * fleet.u_max(i));
            xv(static_cast<Eigen::Index>(i)) = x.back();
            uv(static_cast<Eigen::Index>(i)) = u.back();
        }
        const double x_out = ux(rng) - 10.0;
        const auto direct = fleet.step(x, u, x_out);
        const Eigen::VectorXd affine = m.A * xv + m.B * uv + m.g * x_out;
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(std::abs(direct[i] - affine(static_cast<Eigen::Index>(i))) <= 1e-10);
        }
    }
    const auto blocks = coupled_blocks(m);
    REQUIRE(blocks.size() == 3);
    CHECK(blocks[0] == std::vector<std::size_t>{0});
    CHECK(blocks[1] == std::vector<std::size_t>{1});
    CHECK(blocks[2] == std::vector<std::size_t>{2, 3, 4});
}

TEST_CASE("MPC: one unit at target with free energy stays idle") {
    EnvConfig cfg;
    cfg.fleet.zones = {zone()};
    cfg.episode_length = 1;
    Environment env(cfg, series({0.0, 0.0}, {21.0, 21.0}));
    env.reset(0);
    MpcConfig mc;
    const auto prog = build_mpc_lp(env, 1, mc);
    const auto sol = solve_lp(prog.lp);
    CHECK(prog.powers(sol.x)[0][0] == 0.0);
    CHECK(sol.objective == 0.0);
}

TEST_CASE("MPC: relaxation sandwich against discrete enumeration") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        auto env = random_env(rng, 1, 4);
        MpcConfig mc;
        const double u = env.fleet().u_max(0);
        const std::vector<double> levels{-u, -0.5 * u, 0.0, 0.5 * u, u};
        const auto discrete = verify::discrete_optimum(env, 0, levels, mc);
        CHECK(discrete.evaluated == 625);
        env.reset(0);
        const auto sol = solve_lp(build_mpc_lp(env, 4, mc).lp);
        CHECK(sol.objective >= 0.0);
        CHECK(sol.objective <= discrete.cost + 1e-9);
    }
}

TEST_CASE("MPC: scaling prices scales only the energy term") {
    std::mt19937_64 rng(22);
    auto env = random_env(rng, 2, 6);
    env.reset(0);
    MpcConfig mc;
    const auto base = build_mpc_lp(env, 6, mc);
    const auto sol = solve_lp(base.lp);

    auto exo = env.exogenous();
    for (auto& c : exo.price) {
        c *= 3.0;
    }
    Environment scaled(env.config(), exo);
    scaled.reset(0);
    const auto prog = build_mpc_lp(scaled, 6, mc);
    double energy = 0.0;
    const auto u = base.powers(sol.x);
    for (int t = 0; t < 6; ++t) {
        for (std::size_t k = 0; k < 2; ++k) {
            energy += env.exogenous().price[static_cast<std::size_t>(t)] *
                      (sol.x[static_cast<std::size_t>(base.heat(k, t))] +
                       sol.x[static_cast<std::size_t>(base.cool(k, t))]);
        }
    }
    CHECK(prog.lp.objective(sol.x) - base.lp.objective(sol.x) ==
          doctest::Approx(2.0 * energy).epsilon(1e-12));
    CHECK(u.size() == 6);
}

TEST_CASE("MPC dominates other controllers under its own cost") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        auto env = random_env(rng, 3, 12);
        MpcConfig mc;
        const auto mpc = run_mpc(env, 0, mc);
        CHECK(mpc.cost == doctest::Approx(mpc.lp_objective).epsilon(1e-9));
        CHECK(mpc.cost <= zero_cost(env, mc) + 1e-7);

        // least-laxity-first with a few constant budgets
        for (const double frac : {0.2, 0.5, 1.0}) {
            env.reset(0);
            while (!env.done()) {
                env.step(frac * env.bounds().hi);
            }
            CHECK(mpc.cost <= trace_cost(env.trace(), env.fleet(), mc) + 1e-7);
        }
        // random per-unit powers
        env.reset(0);
        while (!env.done()) {
            std::vector<double> u;
            for (std::size_t i = 0; i < env.size(); ++i) {
                u.push_back((2.0 * unit(rng) - 1.0) * env.fleet().u_max(i));
            }
            env.step_units(u);
        }
        CHECK(mpc.cost <= trace_cost(env.trace(), env.fleet(), mc) + 1e-7);
    }
}

TEST_CASE("MPC: receding horizon never beats full foresight") {
    std::mt19937_64 rng(24);
    auto env = random_env(rng, 2, 10);
    MpcConfig full;
    const auto a = run_mpc(env, 0, full);
    MpcConfig window;
    window.horizon = 3;
    window.receding = true;
    const auto b = run_mpc(env, 0, window);
    CHECK(b.solves == 20);
    CHECK(b.cost >= a.cost - 1e-7);
    CHECK(b.trace.size() == 10);
}

TEST_CASE("MPC: a binding power cap couples the fleet") {
    std::mt19937_64 rng(25);
    auto env0 = random_env(rng, 3, 8);
    auto cfg = env0.config();
    cfg.bounds = PowerBounds{0.0, 5.0};
    for (auto& x : cfg.x0) {
        x = 17.0;
    }
    Environment env(cfg, env0.exogenous());
    MpcConfig mc;
    const auto capped = run_mpc(env, 0, mc);
    CHECK(capped.solves == 1);
    for (const auto& row : capped.trace) {
        double used = 0.0;
        for (const double u : row.u) {
            used += std::abs(u);
        }
        CHECK(used <= 5.0 + 1e-9);
    }
    const auto free = run_mpc(env0, 0, mc);
    CHECK(free.solves == 3);
}

TEST_CASE("MPC: splitting into blocks keeps the optimum") {
    EnvConfig cfg;
    cfg.fleet.zones = {zone()};
    cfg.fleet.buildings = {building()};
    cfg.episode_length = 8;
    cfg.x0 = {18.0, 19.0, 22.0, 20.5};
    std::vector<double> price, x_out;
    for (int t = 0; t <= 8; ++t) {
        price.push_back(0.1 + 0.05 * std::sin(t));
        x_out.push_back(8.0 + 2.0 * t);
    }
    Environment env(cfg, series(price, x_out));
    MpcConfig mc;
    const auto split = run_mpc(env, 0, mc);
    CHECK(split.solves == 2);
    env.reset(0);
    const auto whole = solve_lp(build_mpc_lp(env, 8, mc).lp);
    CHECK(whole.objective == doctest::Approx(split.lp_objective).epsilon(1e-9));
    CHECK(split.cost == doctest::Approx(split.lp_objective).epsilon(1e-9));
}

TEST_CASE("build_mpc_lp rejects bad horizons and foreign couplings") {
    EnvConfig cfg;
    cfg.fleet.buildings = {building()};
    cfg.episode_length = 4;
    Environment env(cfg, series({0.1, 0.1, 0.1, 0.1, 0.1}, {5, 5, 5, 5, 5}));
    env.reset(0);
    MpcConfig mc;
    CHECK_THROWS_AS(build_mpc_lp(env, 5, mc), PreconditionError);
    CHECK_THROWS_AS(build_mpc_lp(env, 0, mc), PreconditionError);
    CHECK_THROWS_AS(build_mpc_lp(env, 4, mc, {0, 1}), PreconditionError);
    mc.band_penalty = -1.0;
    CHECK_THROWS_AS(build_mpc_lp(env, 4, mc), ConfigError);
}

TEST_CASE("CentralizedTask on one unit matches the dispatched environment") {
    EnvConfig cfg;
    cfg.fleet.zones = {zone()};
    cfg.x0 = {17.5};
    cfg.episode_length = 24;
    std::vector<double> price, x_out;
    for (int t = 0; t <= 24; ++t) {
        price.push_back(0.1 + 0.02 * (t % 5));
        x_out.push_back(6.0 + t * 0.5);
    }
    const auto exo = series(price, x_out);
    Environment abstract_env(cfg, exo);
    Environment full_env(cfg, exo);
    CentralizedTask task(full_env);
    CHECK(task.action_lo().size() == 1);
    CHECK(task.action_hi()(0) == 6.0);
    CHECK(task.state_dim() == 3);

    abstract_env.reset(0);
    Eigen::VectorXd s = task.reset(0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> up(0.0, 6.0);
    while (!abstract_env.done()) {
        const auto out = abstract_env.step(up(rng));
        Eigen::VectorXd a(1);
        a << out.u[0];
        Eigen::VectorXd next;
        const double r = task.step(a, next);
        CHECK(next(0) == out.next.x[0]);
        CHECK(next(1) == out.next.x_out);
        CHECK(next(2) == out.next.price);
        CHECK(std::isfinite(r));
    }
    const auto& ta = abstract_env.trace();
    const auto& tf = task.trace();
    REQUIRE(ta.size() == tf.size());
    for (std::size_t k = 0; k < ta.size(); ++k) {
        CHECK(ta[k].x == tf[k].x);
        CHECK(ta[k].u == tf[k].u);
        CHECK(ta[k].laxity == tf[k].laxity);
    }
}

TEST_CASE("CentralizedTask reward and determinism") {
    FleetState s;
    s.price = 0.2;
    s.x = {20.0, 23.0};
    s.targets = {21.0, 21.0};
    const std::vector<double> u{1.0, -2.0};
    RewardConfig rc;
    CHECK(CentralizedTask::reward(s, u, rc) == doctest::Approx(-3.0 - 0.2 * 3.0));

    EnvConfig cfg;
    cfg.fleet.zones = {zone(), zone(0.15)};
    cfg.episode_length = 12;
    std::vector<double> price(30), x_out(30);
    for (std::size_t t = 0; t < 30; ++t) {
        price[t] = 0.1 + 0.05 * std::cos(0.5 * static_cast<double>(t));
        x_out[t] = 10.0 + 4.0 * std::sin(0.3 * static_cast<double>(t));
    }
    rl::TrainConfig tc;
    tc.episodes = 4;
    tc.warmup_steps = 10;
    tc.batch = 8;
    tc.ddpg.hidden = 8;
    tc.seed = 9;
    auto run = [&] {
        Environment env(cfg, series(price, x_out));
        CentralizedTask task(env);
        return rl::train(task, tc).curve;
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.size() == 4);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].reward == b[k].reward);
        CHECK(a[k].tec == b[k].tec);
    }
}
