#pragma once

#include "laxhvac/laxity.hpp"
#include "laxhvac/thermal.hpp"

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace laxhvac {

/// What the aggregator knows about one unit when it splits the budget.
struct DispatchUnit {
    double laxity = 0.0;
    double x = 0.0;
    double x_target = 0.0;
    double u_max = 0.0;
    double min_time = 1.0;  ///< units with nothing left to do are skipped
    /// Largest power that is still useful this step (reaching the target
    /// exactly). Defaults to no cap beyond u_max.
    double need = std::numeric_limits<double>::infinity();
};

/// Power that would bring a single zone exactly to its target this step, in
/// the direction llf_dispatch would drive it; 0 if drift alone gets there.
double power_need(double x, double x_out, const ZoneParams& p);

/// Least-laxity-first split of a total power budget `total` (kW, >= 0).
/// Returns signed per-unit powers: heating when below target, cooling above.
/// A selected unit receives min(u_max, need, remaining budget). Ties on
/// laxity go to the lower index.
std::vector<double> llf_dispatch(double total, std::span<const DispatchUnit> fleet);

/// Total power per step and the per-unit dispatch that realises it.
struct PowerSchedule {
    std::vector<double> total;
    std::vector<std::vector<double>> per_unit;  ///< [step][unit], signed kW

    std::size_t steps() const noexcept { return total.size(); }
};

/// Urgency of one request at one step, as seen by a feasibility check.
struct RequestSnapshot {
    double min_time = 0.0;   ///< e
    double remaining = 0.0;  ///< t_end - t (clamped at 0 once finished)
    double laxity = 0.0;
    bool finished = false;
};

/// A fixed set of requests evolving under per-unit powers. Implementations
/// own their state; reset() returns to the initial step.
class RequestSimulator {
public:
    virtual ~RequestSimulator() = default;

    virtual std::size_t size() const = 0;
    virtual int time() const = 0;
    virtual void reset() = 0;
    virtual RequestSnapshot snapshot(std::size_t unit) const = 0;
    virtual DispatchUnit dispatch_unit(std::size_t unit) const = 0;
    virtual double u_max(std::size_t unit) const = 0;
    virtual const Request& request(std::size_t unit) const = 0;
    virtual void advance(std::span<const double> u) = 0;
    virtual std::unique_ptr<RequestSimulator> clone() const = 0;
};

/// Idealised job model: remaining work e (in steps at full power) drops by
/// |u| / u_max per step once the request has started, and never grows.
class AbstractRequestFleet final : public RequestSimulator {
public:
    struct Job {
        int t_start = 0;
        int t_end = 0;
        double work = 0.0;
        double u_max = 1.0;
    };

    AbstractRequestFleet(std::vector<Job> jobs, int t0);

    std::size_t size() const override { return jobs_.size(); }
    int time() const override { return t_; }
    void reset() override;
    RequestSnapshot snapshot(std::size_t unit) const override;
    DispatchUnit dispatch_unit(std::size_t unit) const override;
    double u_max(std::size_t unit) const override { return jobs_.at(unit).u_max; }
    const Request& request(std::size_t unit) const override { return requests_.at(unit); }
    void advance(std::span<const double> u) override;
    std::unique_ptr<RequestSimulator> clone() const override;

private:
    std::vector<Job> jobs_;
    std::vector<Request> requests_;
    std::vector<double> work_;
    int t0_;
    int t_;
};

/// Single-zone thermal units under a known outdoor temperature series. A
/// request finishes when the temperature reaches or crosses its target.
class ThermalRequestFleet final : public RequestSimulator {
public:
    ThermalRequestFleet(std::vector<ZoneParams> zones, std::vector<double> x0,
                        std::vector<Request> requests, std::vector<double> x_out, int t0);

    std::size_t size() const override { return zones_.size(); }
    int time() const override { return t_; }
    void reset() override;
    RequestSnapshot snapshot(std::size_t unit) const override;
    DispatchUnit dispatch_unit(std::size_t unit) const override;
    double u_max(std::size_t unit) const override { return zones_.at(unit).u_max; }
    const Request& request(std::size_t unit) const override { return requests_.at(unit); }
    void advance(std::span<const double> u) override;
    std::unique_ptr<RequestSimulator> clone() const override;

    double temperature(std::size_t unit) const { return x_.at(unit); }

private:
    double outdoor() const;

    std::vector<ZoneParams> zones_;
    std::vector<double> x0_;
    std::vector<Request> requests_;
    std::vector<double> x_out_;
    std::vector<double> x_;
    std::vector<bool> finished_;
    int t0_;
    int t_;
};

enum class Violation {
    None,
    BudgetExceeded,      ///< sum |u_i| > P[t]
    TotalOutOfBounds,    ///< P[t] outside [P_lo, P_hi]
    UnitPowerExceeded,   ///< |u_i| > u_max
    DeadlineUnreachable, ///< negative slack: cannot finish even at full power
    Unfinished,          ///< e > 0 at the end of the horizon
};

const char* to_string(Violation v) noexcept;

struct FeasibilityReport {
    bool feasible = true;
    Violation violation = Violation::None;
    int step = -1;
    int unit = -1;
    double value = 0.0;
    std::string message;
    /// Per step (t0 .. t0+T), per unit state before that step's powers apply.
    std::vector<std::vector<RequestSnapshot>> trace;
};

struct PowerBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Forward-simulates `schedule` from the simulator's reset state and checks
/// the per-step budget, total power bounds, per-unit limits and that every
/// request completes by its deadline. Reports the first violation.
FeasibilityReport check_feasible(const PowerSchedule& schedule, PowerBounds bounds,
                                 RequestSimulator& sim);

/// Recovers per-unit powers for a total schedule by applying llf_dispatch
/// at every step of a forward simulation from the reset state.
PowerSchedule llf_recover(std::span<const double> total, RequestSimulator& sim);

}  // namespace laxhvac
