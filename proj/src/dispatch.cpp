#include "laxhvac/dispatch.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace laxhvac {

namespace {

constexpr double kTolerance = 1e-9;

}  // namespace

double power_need(double x, double x_out, const ZoneParams& p) {
    const double u = power_to_reach(x, p.x_target, x_out, p);
    return std::max(0.0, x < p.x_target ? u : -u);
}

std::vector<double> llf_dispatch(double total, std::span<const DispatchUnit> fleet) {
    if (total < 0.0) {
        throw PreconditionError("llf_dispatch: total power must be >= 0");
    }
    std::vector<double> u(fleet.size(), 0.0);
    std::vector<std::size_t> order;
    order.reserve(fleet.size());
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        if (fleet[i].min_time > 0.0 && !is_sentinel(fleet[i].laxity)) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return fleet[l].laxity < fleet[r].laxity;
    });

    double budget = 0.0;
    for (const std::size_t k : order) {
        if (!(budget < total)) {
            break;
        }
        const double magnitude = std::min({fleet[k].u_max, fleet[k].need, total - budget});
        u[k] = fleet[k].x < fleet[k].x_target ? magnitude : -magnitude;
        budget += magnitude;
    }
    return u;
}

// ---------------------------------------------------------------------------
// AbstractRequestFleet

AbstractRequestFleet::AbstractRequestFleet(std::vector<Job> jobs, int t0)
    : jobs_(std::move(jobs)), t0_(t0), t_(t0) {
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
        const auto& j = jobs_[i];
        if (j.t_start > j.t_end || j.work < 0.0 || j.u_max <= 0.0) {
            throw PreconditionError("AbstractRequestFleet: invalid job " + std::to_string(i));
        }
        Request r;
        r.unit_id = static_cast<int>(i);
        r.t_start = j.t_start;
        r.t_end = j.t_end;
        requests_.push_back(r);
    }
    reset();
}

void AbstractRequestFleet::reset() {
    t_ = t0_;
    work_.clear();
    for (const auto& j : jobs_) {
        work_.push_back(j.work);
    }
}

RequestSnapshot AbstractRequestFleet::snapshot(std::size_t unit) const {
    const auto& j = jobs_.at(unit);
    RequestSnapshot s;
    s.min_time = work_[unit];
    s.finished = work_[unit] <= 0.0;
    s.remaining = static_cast<double>(j.t_end - t_);
    if (s.finished) {
        s.remaining = std::max(s.remaining, 0.0);
    }
    s.laxity = t_ < j.t_start ? kLaxitySentinel : s.remaining - s.min_time;
    return s;
}

DispatchUnit AbstractRequestFleet::dispatch_unit(std::size_t unit) const {
    const auto s = snapshot(unit);
    // Abstract jobs always consume positive power.
    return DispatchUnit{s.laxity, 0.0, 1.0, jobs_[unit].u_max, s.min_time,
                        s.min_time * jobs_[unit].u_max};
}

void AbstractRequestFleet::advance(std::span<const double> u) {
    if (u.size() != jobs_.size()) {
        throw PreconditionError("AbstractRequestFleet::advance: dimension mismatch");
    }
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
        if (t_ >= jobs_[i].t_start) {
            work_[i] = std::max(0.0, work_[i] - std::abs(u[i]) / jobs_[i].u_max);
        }
    }
    ++t_;
}

std::unique_ptr<RequestSimulator> AbstractRequestFleet::clone() const {
    return std::make_unique<AbstractRequestFleet>(*this);
}

// ---------------------------------------------------------------------------
// ThermalRequestFleet

ThermalRequestFleet::ThermalRequestFleet(std::vector<ZoneParams> zones, std::vector<double> x0,
                                         std::vector<Request> requests, std::vector<double> x_out,
                                         int t0)
    : zones_(std::move(zones)),
      x0_(std::move(x0)),
      requests_(std::move(requests)),
      x_out_(std::move(x_out)),
      t0_(t0),
      t_(t0) {
    if (x0_.size() != zones_.size() || requests_.size() != zones_.size()) {
        throw PreconditionError("ThermalRequestFleet: zones, x0 and requests must align");
    }
    if (x_out_.empty()) {
        throw PreconditionError("ThermalRequestFleet: outdoor series is empty");
    }
    for (const auto& z : zones_) {
        z.validate();
    }
    reset();
}

void ThermalRequestFleet::reset() {
    t_ = t0_;
    x_ = x0_;
    finished_.assign(zones_.size(), false);
    for (std::size_t i = 0; i < zones_.size(); ++i) {
        finished_[i] = std::abs(x_[i] - zones_[i].x_target) <= kTargetTolerance;
    }
}

double ThermalRequestFleet::outdoor() const {
    const auto k = static_cast<std::size_t>(std::max(0, t_ - t0_));
    return x_out_[std::min(k, x_out_.size() - 1)];
}

RequestSnapshot ThermalRequestFleet::snapshot(std::size_t unit) const {
    const auto& z = zones_.at(unit);
    Request req = requests_.at(unit);
    RequestSnapshot s;
    s.finished = finished_[unit];
    s.remaining = static_cast<double>(req.t_end - t_);
    if (s.finished) {
        s.remaining = std::max(s.remaining, 0.0);
        s.min_time = 0.0;
        s.laxity = t_ < req.t_start ? kLaxitySentinel : s.remaining;
        return s;
    }
    s.min_time = min_time(x_[unit], outdoor(), z);
    if (t_ <= req.t_end) {
        s.laxity = laxity(req, t_, x_[unit], outdoor(), z);
    } else {
        s.laxity = s.remaining - s.min_time;
    }
    return s;
}

DispatchUnit ThermalRequestFleet::dispatch_unit(std::size_t unit) const {
    const auto s = snapshot(unit);
    const auto& z = zones_[unit];
    return DispatchUnit{s.laxity, x_[unit], z.x_target, z.u_max, s.min_time,
                        power_need(x_[unit], outdoor(), z)};
}

void ThermalRequestFleet::advance(std::span<const double> u) {
    if (u.size() != zones_.size()) {
        throw PreconditionError("ThermalRequestFleet::advance: dimension mismatch");
    }
    const double x_out = outdoor();
    for (std::size_t i = 0; i < zones_.size(); ++i) {
        const double prev = x_[i];
        x_[i] = step_zone(prev, u[i], x_out, zones_[i]);
        const double target = zones_[i].x_target;
        const bool reached = (prev - target) * (x_[i] - target) <= 0.0 ||
                             std::abs(x_[i] - target) <= kTargetTolerance;
        if (t_ >= requests_[i].t_start && reached) {
            finished_[i] = true;
        }
    }
    ++t_;
}

std::unique_ptr<RequestSimulator> ThermalRequestFleet::clone() const {
    return std::make_unique<ThermalRequestFleet>(*this);
}

// ---------------------------------------------------------------------------

const char* to_string(Violation v) noexcept {
    switch (v) {
        case Violation::None: return "none";
        case Violation::BudgetExceeded: return "budget_exceeded";
        case Violation::TotalOutOfBounds: return "total_out_of_bounds";
        case Violation::UnitPowerExceeded: return "unit_power_exceeded";
        case Violation::DeadlineUnreachable: return "deadline_unreachable";
        case Violation::Unfinished: return "unfinished";
    }
    return "unknown";
}

namespace {

void flag(FeasibilityReport& r, Violation v, int step, int unit, double value) {
    if (!r.feasible) {
        return;
    }
    r.feasible = false;
    r.violation = v;
    r.step = step;
    r.unit = unit;
    r.value = value;
    std::ostringstream msg;
    msg << to_string(v) << " at step " << step;
    if (unit >= 0) {
        msg << ", unit " << unit;
    }
    msg << " (value " << value << ")";
    r.message = msg.str();
}

std::vector<RequestSnapshot> snapshot_all(const RequestSimulator& sim) {
    std::vector<RequestSnapshot> out;
    out.reserve(sim.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        out.push_back(sim.snapshot(i));
    }
    return out;
}

void check_slack(FeasibilityReport& r, const RequestSimulator& sim,
                 const std::vector<RequestSnapshot>& snaps) {
    const int t = sim.time();
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const auto& s = snaps[i];
        if (s.finished || t < sim.request(i).t_start) {
            continue;
        }
        const double slack = s.remaining - s.min_time;
        if (slack < -kTolerance) {
            flag(r, Violation::DeadlineUnreachable, t, static_cast<int>(i), slack);
        }
    }
}

}  // namespace

FeasibilityReport check_feasible(const PowerSchedule& schedule, PowerBounds bounds,
                                 RequestSimulator& sim) {
    if (schedule.per_unit.size() != schedule.total.size()) {
        throw PreconditionError("check_feasible: per_unit and total lengths differ");
    }
    sim.reset();
    FeasibilityReport report;
    for (std::size_t k = 0; k < schedule.steps(); ++k) {
        const int t = sim.time();
        const auto& u = schedule.per_unit[k];
        if (u.size() != sim.size()) {
            throw PreconditionError("check_feasible: per_unit width differs from fleet size");
        }
        auto snaps = snapshot_all(sim);
        check_slack(report, sim, snaps);
        report.trace.push_back(std::move(snaps));

        const double p = schedule.total[k];
        if (p < bounds.lo - kTolerance || p > bounds.hi + kTolerance) {
            flag(report, Violation::TotalOutOfBounds, t, -1, p);
        }
        double used = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            used += std::abs(u[i]);
            if (std::abs(u[i]) > sim.u_max(i) + kTolerance) {
                flag(report, Violation::UnitPowerExceeded, t, static_cast<int>(i), u[i]);
            }
        }
        if (used > p + kTolerance) {
            flag(report, Violation::BudgetExceeded, t, -1, used);
        }
        sim.advance(u);
    }

    auto snaps = snapshot_all(sim);
    check_slack(report, sim, snaps);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        if (!snaps[i].finished && snaps[i].min_time > kTolerance) {
            flag(report, Violation::Unfinished, sim.time(), static_cast<int>(i), snaps[i].min_time);
        }
    }
    report.trace.push_back(std::move(snaps));
    return report;
}

PowerSchedule llf_recover(std::span<const double> total, RequestSimulator& sim) {
    sim.reset();
    PowerSchedule out;
    std::vector<DispatchUnit> units(sim.size());
    for (const double p : total) {
        for (std::size_t i = 0; i < sim.size(); ++i) {
            units[i] = sim.dispatch_unit(i);
        }
        auto u = llf_dispatch(p, units);
        sim.advance(u);
        out.total.push_back(p);
        out.per_unit.push_back(std::move(u));
    }
    sim.reset();
    return out;
}

}  // namespace laxhvac
