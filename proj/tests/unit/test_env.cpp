#include "laxhvac/env.hpp"
#include "laxhvac/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace laxhvac;

namespace {

ZoneParams unit_zone() {
    ZoneParams p;
    p.a = 0.1;
    p.b = 0.5;
    p.u_max = 6.0;
    return p;
}

ExogenousSeries flat_series(std::size_t n, double price, double x_out) {
    ExogenousSeries s;
    s.price.assign(n, price);
    s.x_out.assign(n, x_out);
    return s;
}

FleetState with_laxities(std::vector<double> laxities, double price) {
    FleetState s;
    s.price = price;
    for (std::size_t i = 0; i < laxities.size(); ++i) {
        Request r;
        r.unit_id = static_cast<int>(i);
        r.laxity = laxities[i];
        s.requests.push_back(r);
        s.x.push_back(20.0);
        s.targets.push_back(21.0);
    }
    return s;
}

}  // namespace

TEST_CASE("abstract sums laxities and skips pre-start requests") {
    auto s = with_laxities({2.0, 3.0, -1.0}, 0.1);
    CHECK(abstract(s) == AbstractState{0.1, 4.0});

    auto p = with_laxities({-1.0, 2.0, 3.0}, 0.1);
    CHECK(abstract(p) == abstract(s));

    CHECK(abstract(with_laxities({kLaxitySentinel, 5.0}, 0.2)).laxity_sum == 5.0);
}

TEST_CASE("reward") {
    RewardConfig cfg{1.0, 1.0, 0.9};
    CHECK(reward(AbstractState{0.1, 5.0}, 10.0, cfg) == doctest::Approx(4.0).epsilon(1e-15));
    cfg.alpha = 0.05;
    CHECK(reward(AbstractState{0.3, 7.0}, 0.0, cfg) == 0.05 * 7.0);

    auto a = with_laxities({1.0, 4.0}, 0.2);
    auto b = with_laxities({2.5, 0.5, 2.0}, 0.2);
    b.x = {15.0, 25.0, 30.0};
    CHECK(reward(a, 3.0, cfg) == reward(b, 3.0, cfg));

    CHECK_THROWS_AS((RewardConfig{0.0, 0.0, 0.9}.validate()), ConfigError);
    CHECK_THROWS_AS((RewardConfig{1.0, 0.0, 1.0}.validate()), ConfigError);
}

TEST_CASE("env_step: idle fleet at target") {
    EnvConfig cfg;
    cfg.fleet.zones.assign(3, unit_zone());
    Environment env(cfg, flat_series(96, 0.1, 18.0));
    const auto before = env.state();
    const double l0 = abstract(before).laxity_sum;
    const auto out = env.step(0.0);
    CHECK(out.reward == doctest::Approx(cfg.reward.alpha * l0).epsilon(1e-15));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(out.u[i] == 0.0);
        const double d = out.next.requests[i].laxity - before.requests[i].laxity;
        CHECK(d <= 1e-9);
        CHECK(d >= -1.0 - 1e-9);
    }
}

TEST_CASE("env_step: one unit served at full power keeps its laxity") {
    EnvConfig cfg;
    cfg.fleet.zones = {unit_zone()};
    cfg.x0 = {19.2};
    Environment env(cfg, flat_series(96, 0.1, 5.0));
    const double l0 = env.state().requests[0].laxity;
    const auto out = env.step(6.0);
    CHECK(out.u[0] == 6.0);
    CHECK(std::abs(out.next.requests[0].laxity - l0) <= 1e-9);
}

TEST_CASE("env_step clamps power and never exceeds it") {
    EnvConfig cfg;
    for (int i = 0; i < 5; ++i) {
        cfg.fleet.zones.push_back(unit_zone());
        cfg.x0.push_back(16.0 + i);
    }
    ExogenousSeries exo;
    for (int t = 0; t < 120; ++t) {
        exo.price.push_back(0.1 + 0.05 * std::sin(t * 0.3));
        exo.x_out.push_back(8.0 + 6.0 * std::sin(t * 0.26));
    }
    Environment env(cfg, exo);
    CHECK(env.bounds().hi == 30.0);
    auto out = env.step(1e6);
    CHECK(out.power == 30.0);
    out = env.step(-4.0);
    CHECK(out.power == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> power(0.0, 30.0);
    while (!env.done()) {
        const double p = power(rng);
        out = env.step(p);
        double used = 0.0;
        for (const double u : out.u) {
            used += std::abs(u);
        }
        CHECK(used <= p + 1e-9);
    }
    CHECK(env.trace().size() == 96);
    CHECK_THROWS_AS(env.step(1.0), PreconditionError);
}

TEST_CASE("environment runs are deterministic") {
    EnvConfig cfg;
    cfg.fleet.zones.assign(4, unit_zone());
    cfg.x0 = {17.0, 19.0, 22.0, 24.0};
    ExogenousSeries exo;
    for (int t = 0; t < 200; ++t) {
        exo.price.push_back(0.05 + 0.001 * (t % 24));
        exo.x_out.push_back(10.0 + 0.1 * (t % 17));
    }
    auto run = [&](std::size_t offset) {
        Environment env(cfg, exo);
        env.reset(offset);
        int k = 0;
        while (!env.done()) {
            env.step(static_cast<double>((k++ * 7) % 25));
        }
        std::ostringstream os;
        write_trace_csv(os, env.trace());
        return os.str();
    };
    CHECK(run(5) == run(5));
    CHECK(run(5) != run(6));
}

TEST_CASE("target schedule issues new requests") {
    EnvConfig cfg;
    cfg.fleet.zones = {unit_zone()};
    cfg.episode_length = 4;
    cfg.target_schedule = {21.0, 21.0, 18.0, 18.0};
    Environment env(cfg, flat_series(4, 0.1, 15.0));
    env.step(0.0);
    const int t_end = env.state().requests[0].t_end;
    env.step(0.0);
    CHECK(env.state().targets[0] == 18.0);
    CHECK(env.state().requests[0].t_start == 2);
    CHECK(env.state().requests[0].t_end == 2 + cfg.duration.duration);
    CHECK(t_end != env.state().requests[0].t_end);

    cfg.target_schedule = {21.0};
    CHECK_THROWS_AS(Environment(cfg, flat_series(4, 0.1, 15.0)), ConfigError);
}

TEST_CASE("an unreachable target surfaces as a scenario error") {
    EnvConfig cfg;
    auto weak = unit_zone();
    weak.u_max = 1.0;  // steady state only 5 degC above outdoors
    cfg.fleet.zones = {weak};
    cfg.x0 = {20.0};
    try {
        Environment env(cfg, flat_series(96, 0.1, -5.0));
        FAIL("expected a scenario error");
    } catch (const ScenarioError& e) {
        CHECK(e.unit() == 0);
        CHECK(e.step() == 0);
    }
}

TEST_CASE("multi-zone buildings are dispatched zone by zone") {
    BuildingParams b;
    b.zones = {{2.0, 2.5, 3.0, 19.0, 23.0, 21.0, 8.0}, {2.0, 2.5, 3.0, 19.0, 23.0, 21.0, 8.0}};
    b.coupling = Eigen::MatrixXd::Zero(2, 2);
    b.coupling(0, 1) = b.coupling(1, 0) = 2.0;
    EnvConfig cfg;
    cfg.fleet.zones = {unit_zone()};
    cfg.fleet.buildings = {b};
    cfg.x0 = {18.0, 17.0, 20.0};
    Environment env(cfg, flat_series(96, 0.1, 10.0));
    CHECK(env.size() == 3);
    CHECK(env.bounds().hi == 22.0);
    while (!env.done()) {
        env.step(22.0);
    }
    const auto& last = env.state();
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(last.x[i] - 21.0) < 2.0);
    }
}

TEST_CASE("metrics") {
    std::vector<TraceRow> rows(2);
    rows[0].x = {22.0};
    rows[0].target = {21.0};
    rows[0].u = {5.0};
    rows[0].price = 0.1;
    rows[1].x = {19.0};
    rows[1].target = {21.0};
    rows[1].u = {-2.5};
    rows[1].price = 0.2;
    const auto m = metrics(rows);
    CHECK(m.atd == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(m.tec == doctest::Approx(1.0).epsilon(1e-15));

    rows[0].x = rows[0].target;
    rows[1].x = rows[1].target;
    rows[0].u = {0.0};
    rows[1].u = {0.0};
    CHECK(metrics(rows).atd == 0.0);
    CHECK(metrics(rows).tec == 0.0);
    CHECK_THROWS_AS(metrics(std::vector<TraceRow>{}), PreconditionError);
}

TEST_CASE("trace CSV round-trips exactly") {
    EnvConfig cfg;
    cfg.fleet.zones.assign(2, unit_zone());
    cfg.x0 = {18.3, 23.1};
    cfg.episode_length = 10;
    Environment env(cfg, flat_series(10, 0.137, 9.1));
    while (!env.done()) {
        env.step(4.7);
    }
    std::stringstream ss;
    write_trace_csv(ss, env.trace());
    const auto rows = read_trace_csv(ss);
    REQUIRE(rows.size() == env.trace().size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& a = rows[k];
        const auto& b = env.trace()[k];
        CHECK(a.t == b.t);
        CHECK(a.price == b.price);
        CHECK(a.power == b.power);
        CHECK(a.x == b.x);
        CHECK(a.u == b.u);
        CHECK(a.laxity == b.laxity);
        CHECK(a.target == b.target);
    }

    std::stringstream bad("t,price,x_out,power,x_0,u_0,laxity_0,target_0\n0,1,2,3,4,x,6,7\n");
    CHECK_THROWS_AS(read_trace_csv(bad), DataError);
}
