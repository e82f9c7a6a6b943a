#pragma once

#include "laxhvac/dispatch.hpp"
#include "laxhvac/laxity.hpp"
#include "laxhvac/thermal.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace laxhvac {

/// Hourly price and outdoor temperature, aligned index by index. Timestamps
/// (seconds since the epoch, UTC) are optional for synthetic data.
struct ExogenousSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> price;  ///< currency per kWh
    std::vector<double> x_out;  ///< degC

    std::size_t size() const noexcept { return price.size(); }
    void validate() const;
};

/// The controllable units: independent single zones first, then every zone
/// of every building in order. Each zone of a building is its own unit.
struct FleetSpec {
    std::vector<ZoneParams> zones;
    std::vector<BuildingParams> buildings;

    std::size_t size() const noexcept;
    double dt() const;
    void validate() const;
};

/// Stateless view of a fleet: single-zone parameters for laxity and the joint
/// thermal update.
class Fleet {
public:
    explicit Fleet(FleetSpec spec);

    std::size_t size() const noexcept { return units_.size(); }
    const FleetSpec& spec() const noexcept { return spec_; }
    double dt() const noexcept { return dt_; }
    double u_max(std::size_t unit) const;
    /// Configured target of a unit (before any schedule override).
    double base_target(std::size_t unit) const;
    double total_u_max() const;

    /// Single-zone parameters and effective ambient for `unit` given every
    /// unit's temperature. A finite `target` moves the target and shifts the
    /// comfort band with it.
    ZonalView view(std::size_t unit, std::span<const double> x, double x_out,
                   double target) const;

    /// Temperatures after one step of per-unit powers `u` under `x_out`.
    std::vector<double> step(std::span<const double> x, std::span<const double> u,
                             double x_out) const;

private:
    struct Slot {
        int building = -1;  ///< -1 for an independent zone
        std::size_t index = 0;
    };

    FleetSpec spec_;
    std::vector<Slot> units_;
    double dt_ = 1.0;
};

struct RewardConfig {
    double alpha = 0.05;
    double beta = 1.0;
    double gamma = 0.99;

    void validate() const;
};

/// What the controller sees: the price and the summed laxity of all started
/// requests.
struct AbstractState {
    double price = 0.0;
    double laxity_sum = 0.0;

    bool operator==(const AbstractState&) const = default;
};

struct FleetState {
    int t = 0;  ///< step within the episode
    double price = 0.0;
    double x_out = 0.0;
    std::vector<double> x;
    std::vector<double> targets;
    std::vector<Request> requests;
};

AbstractState abstract(const FleetState& s);

double reward(const AbstractState& s, double power, const RewardConfig& cfg);
double reward(const FleetState& s, double power, const RewardConfig& cfg);

struct EnvConfig {
    FleetSpec fleet;
    std::vector<double> x0;  ///< initial temperature per unit
    int episode_length = 96;
    DurationConfig duration;
    RewardConfig reward;
    PowerBounds bounds{0.0, -1.0};  ///< hi < lo means [0, total u_max]
    /// Absolute target per episode step applied to every unit; empty keeps
    /// the configured targets. A change of target issues a new request.
    std::vector<double> target_schedule;
};

/// Exogenous values at one step.
struct Exogenous {
    double price = 0.0;
    double x_out = 0.0;
};

struct StepOutcome {
    FleetState next;
    double reward = 0.0;
    double power = 0.0;     ///< clamped total power
    std::vector<double> u;  ///< signed per-unit powers
};

/// One transition. Clamps `power` to the bounds, dispatches least laxity
/// first, advances the thermal state, renews requests, refreshes laxities
/// and rewards the pre-transition laxities. `target_next` holds the targets
/// at the next step.
StepOutcome env_step(const Fleet& fleet, const FleetState& s, double power, Exogenous next,
                     std::span<const double> target_next, PowerBounds bounds,
                     const DurationConfig& duration, const RewardConfig& reward_cfg);

/// The part of a transition after dispatch: thermal update under per-unit
/// powers `u`, request renewal and laxity refresh.
FleetState advance_fleet(const Fleet& fleet, const FleetState& s, std::span<const double> u,
                         Exogenous next, std::span<const double> target_next,
                         const DurationConfig& duration);

/// Refreshes the cached penalty, min_time and laxity of every request.
void refresh_laxities(const Fleet& fleet, FleetState& s);

/// One row of an episode trace; x, laxity and target are before the step.
struct TraceRow {
    int t = 0;
    double price = 0.0;
    double x_out = 0.0;
    double power = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> laxity;
    std::vector<double> target;
};

struct Metrics {
    double atd = 0.0;  ///< mean |x - target| over rows and units, degC
    double tec = 0.0;  ///< sum of price * |u| * dt, currency
};

Metrics metrics(std::span<const TraceRow> trace, double dt = 1.0);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Episode driver over an exogenous series.
class Environment {
public:
    Environment(EnvConfig cfg, ExogenousSeries exo);

    /// Starts an episode at index `offset` of the exogenous series.
    const FleetState& reset(std::size_t offset = 0);
    StepOutcome step(double power);
    /// Applies per-unit powers directly, bypassing the dispatcher. Each power
    /// is clamped to its unit's limit; the recorded total is sum |u|.
    StepOutcome step_units(std::span<const double> u);

    const FleetState& state() const noexcept { return state_; }
    AbstractState observe() const { return abstract(state_); }
    bool done() const noexcept { return state_.t >= cfg_.episode_length; }
    std::size_t size() const noexcept { return fleet_.size(); }
    PowerBounds bounds() const noexcept { return bounds_; }
    const Fleet& fleet() const noexcept { return fleet_; }
    const EnvConfig& config() const noexcept { return cfg_; }
    const ExogenousSeries& exogenous() const noexcept { return exo_; }
    const std::vector<TraceRow>& trace() const noexcept { return trace_; }
    /// Number of valid episode offsets.
    std::size_t episode_starts() const noexcept;

    Exogenous exogenous_at(int t) const;
    std::vector<double> targets_at(int t) const;

private:
    void record(const StepOutcome& out);

    EnvConfig cfg_;
    ExogenousSeries exo_;
    Fleet fleet_;
    PowerBounds bounds_;
    FleetState state_;
    std::size_t offset_ = 0;
    std::vector<TraceRow> trace_;
};

}  // namespace laxhvac
