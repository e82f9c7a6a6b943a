#include "laxhvac/error.hpp"
#include "laxhvac/laxity.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace laxhvac;

namespace {

ZoneParams heating_zone() {
    ZoneParams p;
    p.a = 0.2;
    p.b = 1.0;
    p.u_max = 5.0;
    p.x_lo = 19.0;
    p.x_hi = 23.0;
    p.x_target = 21.0;
    return p;
}

double run_steps(double x, double u, double x_out, const ZoneParams& p, int k) {
    for (int i = 0; i < k; ++i) {
        x = step_zone(x, u, x_out, p);
    }
    return x;
}

}  // namespace

TEST_CASE("zeta of identical temperatures is zero") {
    CHECK(zeta(21.0, 21.0, 5.0, 0.0, heating_zone()) == 0.0);
}

TEST_CASE("zeta inverts exact steps at max power") {
    const auto p = heating_zone();
    const double x_out = 5.0;
    for (int k : {1, 2, 3, 5}) {
        const double reached = run_steps(18.0, p.u_max, x_out, p, k);
        CHECK(std::abs(zeta(reached, 18.0, p.u_max, x_out, p) - k) <= 1e-9);
    }
}

TEST_CASE("zeta reports an unreachable target") {
    auto p = heating_zone();
    // Steady state at full heating is x_out + 25 degC.
    CHECK_THROWS_AS(zeta(21.0, 12.0, p.u_max, -10.0, p), ZetaDomainError);  // between
    CHECK_THROWS_AS(zeta(21.0, 17.0, p.u_max, -15.0, p), ZetaDomainError);  // beyond
    try {
        zeta(21.0, 17.0, p.u_max, -5.0 - 10.0, p);
    } catch (const ZetaDomainError& e) {
        CHECK(e.to() == 21.0);
        CHECK(e.from() == 17.0);
        CHECK(e.x_out() == -15.0);
    }
}

TEST_CASE("penalty") {
    const auto p = heating_zone();
    const double x_out = 3.0;
    CHECK(penalty(p.x_target, x_out, p) == 0.0);
    CHECK(penalty(p.x_lo, x_out, p) == 0.0);
    CHECK(penalty(p.x_hi, x_out, p) == 0.0);

    const double cold = p.x_lo - 2.0;
    const double tau = penalty(cold, x_out, p);
    CHECK(tau > 0.0);
    CHECK(tau == zeta(p.x_lo, cold, p.u_max, x_out, p));
    // Round trip: tau steps of full heating land on the lower edge.
    const double whole = std::floor(tau);
    double x = run_steps(cold, p.u_max, x_out, p, static_cast<int>(whole));
    auto frac = p;
    frac.dt = p.dt * (tau - whole);
    x = step_zone(x, p.u_max, x_out, frac);
    CHECK(x == doctest::Approx(p.x_lo).epsilon(1e-10));

    // Continuous at the edges.
    CHECK(penalty(p.x_lo - 1e-9, x_out, p) < 1e-8);
    CHECK(penalty(p.x_hi + 1e-9, x_out, p) < 1e-8);
    CHECK(penalty(p.x_hi + 1.0, x_out, p) == zeta(p.x_hi, p.x_hi + 1.0, -p.u_max, x_out, p));
}

TEST_CASE("min_time") {
    const auto p = heating_zone();
    const double x_out = 12.0;
    CHECK(min_time(p.x_target, x_out, p) == 0.0);
    CHECK(min_time(19.5, x_out, p) == zeta(p.x_target, 19.5, p.u_max, x_out, p));
    CHECK(min_time(22.5, x_out, p) == zeta(p.x_target, 22.5, -p.u_max, x_out, p));
    CHECK(min_time(19.5, x_out, p) > 0.0);
    CHECK(min_time(22.5, x_out, p) > 0.0);
    // One step at full heating from x reduces e by exactly one.
    const double x = 17.0;
    const double after = step_zone(x, p.u_max, x_out, p);
    CHECK(min_time(x, x_out, p) - min_time(after, x_out, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laxity branches") {
    const auto p = heating_zone();
    Request r;
    r.t_start = 10;
    r.t_end = 20;

    CHECK(laxity(r, 5, 18.0, 5.0, p) == kLaxitySentinel);
    CHECK(is_sentinel(r.laxity));

    CHECK(laxity(r, 15, p.x_target, 5.0, p) == 5.0);
    CHECK(r.min_time == 0.0);

    const double cold = p.x_lo - 2.0;
    const double l = laxity(r, 12, cold, 5.0, p);
    CHECK(l < 0.0);
    CHECK(l == -penalty(cold, 5.0, p));
    CHECK(r.penalty == penalty(cold, 5.0, p));

    CHECK_THROWS_AS(laxity(r, 21, 20.0, 5.0, p), PreconditionError);
}

TEST_CASE("renew_request") {
    DurationConfig cfg;
    cfg.duration = 24;
    Request r;
    r.unit_id = 3;
    r.t_start = 0;
    r.t_end = 10;

    SUBCASE("target crossed") {
        auto next = renew_request(r, 5, 20.5, 21.3, 21.0, cfg);
        REQUIRE(next.has_value());
        CHECK(next->unit_id == 3);
        CHECK(next->t_start == 5);
        CHECK(next->t_end == 29);
    }
    SUBCASE("deadline missed") {
        auto next = renew_request(r, 11, 18.0, 18.5, 21.0, cfg);
        REQUIRE(next.has_value());
        CHECK(next->t_start == 11);
    }
    SUBCASE("nothing happened") {
        CHECK_FALSE(renew_request(r, 5, 18.0, 19.0, 21.0, cfg).has_value());
    }
}

TEST_CASE("working HVAC never leaves the zeta domain") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.05, 0.8), uo(-5.0, 35.0), unit(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        ZoneParams p;
        p.a = ua(rng);
        p.x_lo = 18.0 + unit(rng);
        p.x_hi = 23.0 + unit(rng);
        p.x_target = 20.0 + 2.0 * unit(rng);
        p.u_max = 5.0;
        const double x_out = uo(rng);
        // envelope of temperatures considered
        const double env_lo = 10.0, env_hi = 32.0;
        const double worst = std::max(std::abs(x_out - env_lo), std::abs(x_out - env_hi));
        p.b = (worst + 1.0 + 5.0 * unit(rng)) * p.a / p.u_max;
        REQUIRE(p.b * p.u_max / p.a > worst);
        const double x = env_lo + (env_hi - env_lo) * unit(rng);
        CHECK_NOTHROW(penalty(x, x_out, p));
        CHECK_NOTHROW(min_time(x, x_out, p));
    }
}

TEST_CASE("laxity does not increase over time and is flat when served at max") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    int served = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        ZoneParams p;
        p.a = 0.05 + 0.5 * unit(rng);
        p.u_max = 5.0;
        const double x_out = -5.0 + 35.0 * unit(rng);
        p.b = (std::max(std::abs(x_out - 15.0), std::abs(x_out - 28.0)) + 2.0) * p.a / p.u_max *
              (1.0 + unit(rng));
        const double x = p.x_lo + (p.x_hi - p.x_lo) * unit(rng);
        const bool max_power = unit(rng) < 0.4;
        const double toward = x < p.x_target ? p.u_max : -p.u_max;
        const double u = max_power ? toward : (2.0 * unit(rng) - 1.0) * p.u_max;
        Request r;
        r.t_start = 0;
        r.t_end = 30;
        const int t = static_cast<int>(20 * unit(rng));
        const double before = laxity(r, t, x, x_out, p);
        const double next = step_zone(x, u, x_out, p);
        const bool crossed = (x - p.x_target) * (next - p.x_target) <= 0.0;
        if (crossed || next < p.x_lo || next > p.x_hi) {
            continue;
        }
        const double after = laxity(r, t + 1, next, x_out, p);
        CHECK(after <= before + 1e-9);
        ++checked;
        if (max_power) {
            CHECK(std::abs(after - before) <= 1e-9);
            ++served;
        }
    }
    CHECK(checked > 1000);
    CHECK(served > 100);
}

TEST_CASE("comfort violations always rank ahead of in-band slack") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto p = heating_zone();
    for (int trial = 0; trial < 500; ++trial) {
        Request r;
        r.t_start = 0;
        r.t_end = 24;
        const double x_out = 10.0 * unit(rng);
        const double outside = unit(rng) < 0.5 ? p.x_lo - 3.0 * unit(rng) - 1e-6
                                               : p.x_hi + 3.0 * unit(rng) + 1e-6;
        const double inside = p.x_lo + (p.x_hi - p.x_lo) * unit(rng);
        const int t = static_cast<int>(10 * unit(rng));
        const double l_in = laxity(r, t, inside, x_out, p);
        const double l_out = laxity(r, t, outside, x_out, p);
        if (l_in > 0.0) {
            CHECK(l_out < l_in);
        }
        CHECK(l_out < 0.0);
    }
}

TEST_CASE("zonal view reproduces the coupled derivative") {
    BuildingParams b;
    b.zones = {{12.0, 0.4, 1.0, 19.0, 23.0, 21.0, 6.0}, {8.0, 0.6, 0.9, 19.0, 23.0, 21.0, 4.0}};
    b.coupling = Eigen::MatrixXd::Zero(2, 2);
    b.coupling(0, 1) = b.coupling(1, 0) = 0.3;
    Eigen::VectorXd x(2);
    x << 18.0, 22.0;
    const double x_out = 3.0;
    const Eigen::VectorXd u = Eigen::Vector2d(2.0, -1.0);
    Eigen::VectorXd forcing(2);
    for (int i = 0; i < 2; ++i) {
        const auto& z = b.zones[static_cast<std::size_t>(i)];
        forcing(i) = z.efficiency / z.capacity * u(i) + x_out / (z.resistance * z.capacity);
    }
    const Eigen::VectorXd deriv = b.system_matrix() * x + forcing;
    for (int i = 0; i < 2; ++i) {
        const auto view = zonal_view(b, static_cast<std::size_t>(i), x, x_out);
        const double d = view.params.a * (view.ambient - x(i)) + view.params.b * u(i);
        CHECK(d == doctest::Approx(deriv(i)).epsilon(1e-12));
    }
}
