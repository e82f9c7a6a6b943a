#include "laxhvac/error.hpp"
#include "laxhvac/thermal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace laxhvac;

namespace {

BuildingParams three_zone(bool coupled) {
    BuildingParams b;
    b.zones = {
        {12.0, 0.4, 1.0, 19.0, 23.0, 21.0, 6.0},
        {8.0, 0.6, 0.9, 19.0, 23.0, 21.0, 4.0},
        {10.0, 0.5, 1.1, 18.0, 22.0, 20.0, 5.0},
    };
    b.coupling = Eigen::MatrixXd::Zero(3, 3);
    if (coupled) {
        b.coupling(0, 1) = b.coupling(1, 0) = 0.3;
        b.coupling(1, 2) = b.coupling(2, 1) = 0.25;
    }
    return b;
}

}  // namespace

TEST_CASE("step_zone equilibrium and free response") {
    ZoneParams p;
    CHECK(step_zone(20.0, 0.0, 20.0, p) == doctest::Approx(20.0).epsilon(1e-15));

    p.a = std::log(2.0);
    p.dt = 1.0;
    CHECK(step_zone(20.0, 0.0, 30.0, p) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("step_zone matches a fine-step integration oracle") {
    ZoneParams p;
    p.a = 0.2;
    p.b = 0.5;
    p.dt = 1.0;
    const double exact = step_zone(18.0, 3.0, 10.0, p);
    const double integrated = oracle::integrate_zone(18.0, 3.0, 10.0, p, 10000);
    CHECK(std::abs(exact - integrated) <= 1e-6);
}

TEST_CASE("step_zone rejects powers beyond u_max") {
    ZoneParams p;
    CHECK_THROWS_AS(step_zone(20.0, p.u_max * 1.01, 10.0, p), PreconditionError);
    CHECK_NOTHROW(step_zone(20.0, -p.u_max, 10.0, p));
}

TEST_CASE("step_zone properties on random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.05, 1.0), ub(0.1, 2.0), ux(0.0, 35.0),
        uo(-10.0, 35.0), uu(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        ZoneParams p;
        p.a = ua(rng);
        p.b = ub(rng);
        p.u_max = 5.0;
        const double x = ux(rng);
        const double x_out = uo(rng);
        const double u1 = uu(rng) * p.u_max;
        const double u2 = std::min(p.u_max, u1 + 0.1);

        // monotone in u
        if (u2 > u1) {
            CHECK(step_zone(x, u2, x_out, p) > step_zone(x, u1, x_out, p));
        }
        // contraction toward outdoor with no power
        const double next = step_zone(x, 0.0, x_out, p);
        CHECK(std::abs(next - x_out) ==
              doctest::Approx(std::exp(-p.a * p.dt) * std::abs(x - x_out)).epsilon(1e-12));
        // bit-identical on repeat
        CHECK(step_zone(x, u1, x_out, p) == step_zone(x, u1, x_out, p));
    }
}

TEST_CASE("step_building keeps an equilibrium") {
    auto b = three_zone(true);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 12.5);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
    const auto next = step_building(x, u, 12.5, b);
    for (int i = 0; i < 3; ++i) {
        CHECK(next(i) == doctest::Approx(12.5).epsilon(1e-14));
    }
}

TEST_CASE("step_building without coupling reduces to step_zone") {
    auto b = three_zone(false);
    b.substeps = 64;
    Eigen::VectorXd x(3);
    x << 17.0, 22.5, 20.0;
    Eigen::VectorXd u(3);
    u << 5.0, -2.0, 1.5;
    const double x_out = 4.0;
    const auto next = step_building(x, u, x_out, b);
    for (int i = 0; i < 3; ++i) {
        const auto& z = b.zones[static_cast<std::size_t>(i)];
        ZoneParams p;
        p.a = 1.0 / (z.resistance * z.capacity);
        p.b = z.efficiency / z.capacity;
        p.u_max = z.u_max;
        p.dt = b.dt;
        CHECK(std::abs(next(i) - step_zone(x(i), u(i), x_out, p)) <= 1e-6);
    }
}

TEST_CASE("step_building diffusive coupling contracts the gap") {
    BuildingParams b;
    b.zones = {{10.0, 0.5, 1.0, 19.0, 23.0, 21.0, 5.0}, {10.0, 0.5, 1.0, 19.0, 23.0, 21.0, 5.0}};
    b.coupling = Eigen::MatrixXd::Zero(2, 2);
    b.coupling(0, 1) = b.coupling(1, 0) = 0.2;
    Eigen::VectorXd x(2);
    x << 18.0, 24.0;
    const auto next = step_building(x, Eigen::VectorXd::Zero(2), x.mean(), b);
    CHECK(std::abs(next(1) - next(0)) < std::abs(x(1) - x(0)));
}

TEST_CASE("step_building agrees with the matrix-exponential solution") {
    auto b = three_zone(true);
    b.substeps = 32;
    Eigen::VectorXd x(3);
    x << 16.0, 21.0, 24.0;
    Eigen::VectorXd u(3);
    u << 6.0, 0.0, -3.0;
    const auto rk = step_building(x, u, 2.0, b);
    const auto exact = oracle::building_exact(x, u, 2.0, b);
    CHECK((rk - exact).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("step_building converges at fourth order") {
    auto b = three_zone(true);
    // Stiffer coupling so that the truncation error is well above round-off.
    b.coupling(0, 1) = b.coupling(1, 0) = 0.05;
    b.zones[1].capacity = 2.0;
    Eigen::VectorXd x(3);
    x << 15.0, 25.0, 20.0;
    Eigen::VectorXd u(3);
    u << 6.0, -4.0, 2.0;

    auto run = [&](int substeps) {
        auto p = b;
        p.substeps = substeps;
        return step_building(x, u, 0.0, p);
    };
    for (int n : {16, 32}) {
        const auto coarse = run(n);
        const auto fine = run(2 * n);
        const auto reference = run(20 * n);
        const double e_coarse = (coarse - reference).cwiseAbs().maxCoeff();
        const double e_fine = (fine - reference).cwiseAbs().maxCoeff();
        const double ratio = e_coarse / e_fine;
        REQUIRE(e_fine > 1e-11);
        CHECK(ratio > 16.0 / 4.0);
        CHECK(ratio < 16.0 * 4.0);
    }
}

TEST_CASE("step_building validates inputs") {
    auto b = three_zone(true);
    CHECK_THROWS_AS(step_building(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3), 0.0, b),
                    PreconditionError);
    b.coupling(0, 1) = 0.9;
    CHECK_THROWS_AS(step_building(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 0.0, b),
                    PreconditionError);
    CHECK_THROWS_AS(b.validate(), PreconditionError);
}

TEST_CASE("ZoneParams::validate") {
    ZoneParams p;
    CHECK_NOTHROW(p.validate());
    p.x_target = p.x_hi + 1.0;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
}
