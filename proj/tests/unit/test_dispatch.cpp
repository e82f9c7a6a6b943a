#include "laxhvac/dispatch.hpp"
#include "laxhvac/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace laxhvac;

namespace {

// Two requests, both needing three full-power steps; unit 1 due at step 6,
// unit 2 at step 5. Steps are numbered from 1.
AbstractRequestFleet two_requests() {
    return AbstractRequestFleet({{1, 6, 3.0, 5.0}, {1, 5, 3.0, 5.0}}, 1);
}

const std::vector<double> kTotals = {10, 0, 5, 10, 5, 0};

}  // namespace

TEST_CASE("llf_dispatch serves the least laxity first") {
    std::vector<DispatchUnit> fleet = {{1.0, 18.0, 21.0, 5.0, 1.0}, {0.0, 18.0, 21.0, 5.0, 1.0}};
    auto u = llf_dispatch(5.0, fleet);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == 5.0);

    u = llf_dispatch(10.0, fleet);
    CHECK(u[0] == 5.0);
    CHECK(u[1] == 5.0);

    u = llf_dispatch(0.0, fleet);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == 0.0);

    CHECK_THROWS_AS(llf_dispatch(-1.0, fleet), PreconditionError);
}

TEST_CASE("llf_dispatch signs, remainders, ties and skips") {
    std::vector<DispatchUnit> fleet = {
        {2.0, 23.0, 21.0, 4.0, 1.0},  // above target: cools
        {2.0, 18.0, 21.0, 4.0, 1.0},  // tie with unit 0, loses on index
        {-1.0, 18.0, 21.0, 4.0, 1.0},
        {-5.0, 21.0, 21.0, 4.0, 0.0},  // nothing left to do
        {kLaxitySentinel, 18.0, 21.0, 4.0, 1.0},
    };
    const auto u = llf_dispatch(6.0, fleet);
    CHECK(u[2] == 4.0);
    CHECK(u[0] == -2.0);
    CHECK(u[1] == 0.0);
    CHECK(u[3] == 0.0);
    CHECK(u[4] == 0.0);
}

TEST_CASE("llf_dispatch properties on random fleets") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = 1 + static_cast<std::size_t>(unit(rng) * 12);
        std::vector<DispatchUnit> fleet(n);
        double capacity = 0.0;
        for (auto& f : fleet) {
            f.laxity = -5.0 + 30.0 * unit(rng);
            f.x = 15.0 + 10.0 * unit(rng);
            f.x_target = 21.0;
            f.u_max = 1.0 + 4.0 * unit(rng);
            f.min_time = 1.0;
            if (trial % 2 == 1) {
                f.need = 6.0 * unit(rng);
            }
            capacity += std::min(f.u_max, f.need);
        }
        const double total = 1.2 * capacity * unit(rng);
        const auto u = llf_dispatch(total, fleet);

        double used = 0.0;
        int partial = 0;
        for (std::size_t i = 0; i < n; ++i) {
            used += std::abs(u[i]);
            CHECK(std::abs(u[i]) <= fleet[i].u_max + 1e-12);
            if (u[i] != 0.0) {
                CHECK((u[i] > 0.0) == (fleet[i].x < fleet[i].x_target));
            }
            if (u[i] != 0.0 && std::abs(u[i]) < std::min(fleet[i].u_max, fleet[i].need)) {
                ++partial;
            }
        }
        CHECK(used == doctest::Approx(std::min(total, capacity)).epsilon(1e-12));
        CHECK(partial <= 1);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (u[i] != 0.0 && u[j] == 0.0 && fleet[j].need > 0.0) {
                    CHECK(fleet[i].laxity <= fleet[j].laxity);
                }
            }
        }

        auto scaled = fleet;
        const double k = 0.1 + 10.0 * unit(rng);
        for (auto& f : scaled) {
            f.laxity *= k;
        }
        const auto v = llf_dispatch(total, scaled);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK((u[i] != 0.0) == (v[i] != 0.0));
        }
    }
}

TEST_CASE("two-request golden trace: LLF recovery reproduces every cell") {
    auto fleet = two_requests();
    const auto schedule = llf_recover(kTotals, fleet);
    const std::vector<std::vector<double>> u1_u2 = {{5, 5}, {0, 0}, {0, 5}, {5, 5}, {5, 0}, {0, 0}};
    for (std::size_t k = 0; k < kTotals.size(); ++k) {
        CHECK(schedule.per_unit[k] == u1_u2[k]);
    }

    const auto report = check_feasible(schedule, {0.0, 10.0}, fleet);
    CHECK(report.feasible);
    // rows: e, t_e - t, laxity for each request at steps 1..6
    const double e1[] = {3, 2, 2, 2, 1, 0}, r1[] = {5, 4, 3, 2, 1, 0}, l1[] = {2, 2, 1, 0, 0, 0};
    // The golden table gives l2 = 2 at step 1, which contradicts its own
    // e2 = 3 and t_e - t = 4 in the same column; 4 - 3 = 1.
    const double e2[] = {3, 2, 2, 1, 0, 0}, r2[] = {4, 3, 2, 1, 0, 0}, l2[] = {1, 1, 0, 0, 0, 0};
    for (std::size_t k = 0; k < 6; ++k) {
        CAPTURE(k);
        const auto& s = report.trace[k];
        CHECK(s[0].min_time == e1[k]);
        CHECK(s[0].remaining == r1[k]);
        CHECK(s[0].laxity == l1[k]);
        CHECK(s[1].min_time == e2[k]);
        CHECK(s[1].remaining == r2[k]);
        CHECK(s[1].laxity == l2[k]);
    }
}

TEST_CASE("two-request golden trace: swapping power at step 3 breaks request 2") {
    auto fleet = two_requests();
    PowerSchedule swapped;
    swapped.total = kTotals;
    swapped.per_unit = {{5, 5}, {0, 0}, {5, 0}, {5, 5}, {0, 0}, {0, 0}};
    const auto report = check_feasible(swapped, {0.0, 10.0}, fleet);
    CHECK_FALSE(report.feasible);
    CHECK(report.violation == Violation::DeadlineUnreachable);
    CHECK(report.step == 4);
    CHECK(report.unit == 1);
    CHECK(report.value == -1.0);

    const double e1[] = {3, 2, 2, 1, 0, 0}, r1[] = {5, 4, 3, 2, 1, 0}, l1[] = {2, 2, 1, 1, 1, 0};
    const double e2[] = {3, 2, 2, 2, 1, 1}, r2[] = {4, 3, 2, 1, 0, -1}, l2[] = {1, 1, 0, -1, -1, -2};
    for (std::size_t k = 0; k < 6; ++k) {
        CAPTURE(k);
        const auto& s = report.trace[k];
        CHECK(s[0].min_time == e1[k]);
        CHECK(s[0].remaining == r1[k]);
        CHECK(s[0].laxity == l1[k]);
        CHECK(s[1].min_time == e2[k]);
        CHECK(s[1].remaining == r2[k]);
        CHECK(s[1].laxity == l2[k]);
    }
}

TEST_CASE("check_feasible flags schedule-level violations") {
    auto fleet = two_requests();
    auto schedule = llf_recover(kTotals, fleet);

    SUBCASE("budget") {
        schedule.per_unit[1] = {5, 0};
        const auto r = check_feasible(schedule, {0.0, 10.0}, fleet);
        CHECK(r.violation == Violation::BudgetExceeded);
        CHECK(r.step == 2);
    }
    SUBCASE("bounds") {
        const auto r = check_feasible(schedule, {0.0, 8.0}, fleet);
        CHECK(r.violation == Violation::TotalOutOfBounds);
        CHECK(r.step == 1);
    }
    SUBCASE("unit limit") {
        schedule.per_unit[0] = {7, 3};
        const auto r = check_feasible(schedule, {0.0, 10.0}, fleet);
        CHECK(r.violation == Violation::UnitPowerExceeded);
        CHECK(r.unit == 0);
    }
    SUBCASE("unfinished at horizon") {
        AbstractRequestFleet late({{0, 10, 4.0, 5.0}}, 0);
        PowerSchedule s;
        s.total = {5, 5};
        s.per_unit = {{5}, {5}};
        const auto r = check_feasible(s, {0.0, 5.0}, late);
        CHECK(r.violation == Violation::Unfinished);
        CHECK(r.step == 2);
    }
}

TEST_CASE("check_feasible with no requests is vacuously feasible") {
    AbstractRequestFleet empty({}, 0);
    PowerSchedule s;
    s.total = {3.0, 0.0, 7.5};
    s.per_unit = {{}, {}, {}};
    CHECK(check_feasible(s, {0.0, 10.0}, empty).feasible);
}

TEST_CASE("thermal fleet: LLF at full budget finishes heating requests") {
    ZoneParams p;
    p.a = 0.1;
    p.b = 0.5;
    p.u_max = 5.0;
    std::vector<ZoneParams> zones(3, p);
    std::vector<Request> reqs(3);
    for (int i = 0; i < 3; ++i) {
        reqs[static_cast<std::size_t>(i)] = Request{i, 0, 8, 0, 0, 0};
    }
    ThermalRequestFleet fleet(zones, {18.0, 19.5, 20.5}, reqs, std::vector<double>(8, 8.0), 0);
    const std::vector<double> totals(8, 15.0);
    const auto schedule = llf_recover(totals, fleet);
    const auto report = check_feasible(schedule, {0.0, 15.0}, fleet);
    CHECK(report.feasible);

    const std::vector<double> nothing(8, 0.0);
    const auto idle = llf_recover(nothing, fleet);
    CHECK_FALSE(check_feasible(idle, {0.0, 15.0}, fleet).feasible);
}

TEST_CASE("llf_dispatch caps a unit at its need") {
    std::vector<DispatchUnit> fleet = {{0.0, 18.0, 21.0, 5.0, 0.5, 2.5}, {0.0, 18.0, 21.0, 5.0, 1.0}};
    const auto u = llf_dispatch(5.0, fleet);
    CHECK(u[0] == 2.5);
    CHECK(u[1] == 2.5);
}

TEST_CASE("power_need lands a zone on its target") {
    ZoneParams p;
    p.a = 0.2;
    p.b = 1.0;
    const double need = power_need(20.0, 5.0, p);
    REQUIRE(need > 0.0);
    REQUIRE(need < p.u_max);
    CHECK(step_zone(20.0, need, 5.0, p) == doctest::Approx(p.x_target).epsilon(1e-12));

    const double cool = power_need(22.0, 30.0, p);
    REQUIRE(cool > 0.0);
    CHECK(step_zone(22.0, -cool, 30.0, p) == doctest::Approx(p.x_target).epsilon(1e-12));
    // warm outdoors pushes a cold zone past the target on its own
    CHECK(power_need(20.9, 40.0, p) == 0.0);
}

TEST_CASE("thermal fleet: a need-capped unit finishes exactly on target") {
    ZoneParams p;
    p.a = 0.2;
    p.b = 1.0;
    ThermalRequestFleet fleet({p}, {20.5}, {Request{0, 0, 4, 0, 0, 0}}, {5.0}, 0);
    const std::vector<double> totals = {5.0};
    const auto s = llf_recover(totals, fleet);
    CHECK(s.per_unit[0][0] < 5.0);
    fleet.advance(s.per_unit[0]);
    CHECK(fleet.snapshot(0).finished);
    CHECK(fleet.temperature(0) == doctest::Approx(p.x_target).epsilon(1e-12));
}

TEST_CASE("LLF misses a deadline that another split meets") {
    // A: 3 steps of work due at 5; B: 2 steps due at 3; budget 1, 2, 2, 0, 0.
    AbstractRequestFleet fleet({{0, 5, 3.0, 1.0}, {0, 3, 2.0, 1.0}}, 0);
    const std::vector<double> totals = {1, 2, 2, 0, 0};
    const PowerBounds bounds{0.0, 2.0};

    const auto llf = llf_recover(totals, fleet);
    CHECK(llf.per_unit[0] == std::vector<double>{0.0, 1.0});
    const auto report = check_feasible(llf, bounds, fleet);
    CHECK_FALSE(report.feasible);
    CHECK(report.violation == Violation::DeadlineUnreachable);
    CHECK(report.unit == 0);

    PowerSchedule other;
    other.total = totals;
    other.per_unit = {{1, 0}, {1, 1}, {1, 1}, {0, 0}, {0, 0}};
    CHECK(check_feasible(other, bounds, fleet).feasible);
}
