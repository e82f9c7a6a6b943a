#include "laxhvac/env.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace laxhvac {

void ExogenousSeries::validate() const {
    if (x_out.size() != price.size()) {
        throw DataError("exogenous series: price has " + std::to_string(price.size()) +
                        " points but x_out has " + std::to_string(x_out.size()));
    }
    if (!timestamps.empty() && timestamps.size() != price.size()) {
        throw DataError("exogenous series: timestamps do not align with values");
    }
    for (std::size_t i = 0; i < price.size(); ++i) {
        if (!std::isfinite(price[i]) || !std::isfinite(x_out[i])) {
            throw DataError("exogenous series: non-finite value at index " + std::to_string(i));
        }
        if (i > 0 && !timestamps.empty() && timestamps[i] <= timestamps[i - 1]) {
            throw DataError("exogenous series: timestamps not increasing at index " +
                            std::to_string(i));
        }
    }
}

// ---------------------------------------------------------------------------
// Fleet

std::size_t FleetSpec::size() const noexcept {
    std::size_t n = zones.size();
    for (const auto& b : buildings) {
        n += b.size();
    }
    return n;
}

double FleetSpec::dt() const {
    if (!zones.empty()) {
        return zones.front().dt;
    }
    if (!buildings.empty()) {
        return buildings.front().dt;
    }
    return 1.0;
}

void FleetSpec::validate() const {
    if (size() == 0) {
        throw PreconditionError("fleet: no units");
    }
    const double step = dt();
    for (const auto& z : zones) {
        z.validate();
        if (z.dt != step) {
            throw PreconditionError("fleet: every unit must share one timestep");
        }
    }
    for (const auto& b : buildings) {
        b.validate();
        if (b.dt != step) {
            throw PreconditionError("fleet: every unit must share one timestep");
        }
    }
}

Fleet::Fleet(FleetSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    dt_ = spec_.dt();
    for (std::size_t i = 0; i < spec_.zones.size(); ++i) {
        units_.push_back({-1, i});
    }
    for (std::size_t k = 0; k < spec_.buildings.size(); ++k) {
        for (std::size_t z = 0; z < spec_.buildings[k].size(); ++z) {
            units_.push_back({static_cast<int>(k), z});
        }
    }
}

double Fleet::u_max(std::size_t unit) const {
    const auto& s = units_.at(unit);
    if (s.building < 0) {
        return spec_.zones[s.index].u_max;
    }
    return spec_.buildings[static_cast<std::size_t>(s.building)].zones[s.index].u_max;
}

double Fleet::base_target(std::size_t unit) const {
    const auto& s = units_.at(unit);
    if (s.building < 0) {
        return spec_.zones[s.index].x_target;
    }
    return spec_.buildings[static_cast<std::size_t>(s.building)].zones[s.index].x_target;
}

double Fleet::total_u_max() const {
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        total += u_max(i);
    }
    return total;
}

namespace {

void retarget(ZoneParams& p, double target) {
    if (!std::isfinite(target)) {
        return;
    }
    const double shift = target - p.x_target;
    p.x_lo += shift;
    p.x_hi += shift;
    p.x_target = target;
}

}  // namespace

ZonalView Fleet::view(std::size_t unit, std::span<const double> x, double x_out,
                      double target) const {
    if (x.size() != size()) {
        throw PreconditionError("Fleet::view: temperature vector has wrong size");
    }
    const auto& s = units_.at(unit);
    ZonalView v;
    if (s.building < 0) {
        v.params = spec_.zones[s.index];
        v.ambient = x_out;
    } else {
        const auto& b = spec_.buildings[static_cast<std::size_t>(s.building)];
        const std::size_t first = unit - s.index;
        Eigen::VectorXd xb(static_cast<Eigen::Index>(b.size()));
        for (std::size_t z = 0; z < b.size(); ++z) {
            xb(static_cast<Eigen::Index>(z)) = x[first + z];
        }
        v = zonal_view(b, s.index, xb, x_out);
    }
    retarget(v.params, target);
    return v;
}

std::vector<double> Fleet::step(std::span<const double> x, std::span<const double> u,
                                double x_out) const {
    if (x.size() != size() || u.size() != size()) {
        throw PreconditionError("Fleet::step: dimension mismatch");
    }
    std::vector<double> next(size());
    std::size_t i = 0;
    for (; i < spec_.zones.size(); ++i) {
        next[i] = step_zone(x[i], u[i], x_out, spec_.zones[i]);
    }
    for (const auto& b : spec_.buildings) {
        const auto n = static_cast<Eigen::Index>(b.size());
        Eigen::VectorXd xb(n), ub(n);
        for (Eigen::Index z = 0; z < n; ++z) {
            xb(z) = x[i + static_cast<std::size_t>(z)];
            ub(z) = u[i + static_cast<std::size_t>(z)];
        }
        const auto nb = step_building(xb, ub, x_out, b);
        for (Eigen::Index z = 0; z < n; ++z) {
            next[i + static_cast<std::size_t>(z)] = nb(z);
        }
        i += b.size();
    }
    return next;
}

// ---------------------------------------------------------------------------
// MDP

void RewardConfig::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta <= 0.0) {
        throw ConfigError("reward: alpha and beta must be >= 0 with a positive sum");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ConfigError("reward.gamma: must lie in (0, 1)");
    }
}

AbstractState abstract(const FleetState& s) {
    // Summed in sorted order so the result does not depend on unit order.
    std::vector<double> values;
    values.reserve(s.requests.size());
    for (const auto& r : s.requests) {
        if (!is_sentinel(r.laxity)) {
            values.push_back(r.laxity);
        }
    }
    std::sort(values.begin(), values.end());
    AbstractState a;
    a.price = s.price;
    for (const double v : values) {
        a.laxity_sum += v;
    }
    return a;
}

double reward(const AbstractState& s, double power, const RewardConfig& cfg) {
    return cfg.alpha * s.laxity_sum - cfg.beta * s.price * power;
}

double reward(const FleetState& s, double power, const RewardConfig& cfg) {
    return reward(abstract(s), power, cfg);
}

void refresh_laxities(const Fleet& fleet, FleetState& s) {
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const auto v = fleet.view(i, s.x, s.x_out, s.targets[i]);
        try {
            laxity(s.requests[i], s.t, s.x[i], v.ambient, v.params);
        } catch (const ZetaDomainError& e) {
            std::ostringstream msg;
            msg << "unit " << i << " at step " << s.t << " cannot reach its target: " << e.what();
            throw ScenarioError(msg.str(), static_cast<int>(i), s.t);
        }
    }
}

StepOutcome env_step(const Fleet& fleet, const FleetState& s, double power, Exogenous next,
                     std::span<const double> target_next, PowerBounds bounds,
                     const DurationConfig& duration, const RewardConfig& reward_cfg) {
    const std::size_t n = fleet.size();
    if (s.x.size() != n || s.targets.size() != n || s.requests.size() != n ||
        target_next.size() != n) {
        throw PreconditionError("env_step: state does not match the fleet");
    }
    if (!std::isfinite(power)) {
        throw PreconditionError("env_step: total power is not finite");
    }
    StepOutcome out;
    out.power = std::clamp(power, bounds.lo, bounds.hi);

    std::vector<DispatchUnit> units(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = fleet.view(i, s.x, s.x_out, s.targets[i]);
        const auto& r = s.requests[i];
        units[i] = DispatchUnit{r.laxity,          s.x[i],       v.params.x_target,
                                v.params.u_max,    r.min_time,
                                power_need(s.x[i], v.ambient, v.params)};
    }
    out.u = llf_dispatch(out.power, units);
    out.reward = reward(s, out.power, reward_cfg);

    out.next = advance_fleet(fleet, s, out.u, next, target_next, duration);
    return out;
}

FleetState advance_fleet(const Fleet& fleet, const FleetState& s, std::span<const double> u,
                         Exogenous next, std::span<const double> target_next,
                         const DurationConfig& duration) {
    const std::size_t n = fleet.size();
    if (s.x.size() != n || s.targets.size() != n || s.requests.size() != n ||
        target_next.size() != n || u.size() != n) {
        throw PreconditionError("advance_fleet: state does not match the fleet");
    }
    FleetState ns;
    ns.t = s.t + 1;
    ns.price = next.price;
    ns.x_out = next.x_out;
    ns.x = fleet.step(s.x, u, s.x_out);
    ns.targets.assign(target_next.begin(), target_next.end());
    ns.requests = s.requests;
    for (std::size_t i = 0; i < n; ++i) {
        auto& req = ns.requests[i];
        if (ns.targets[i] != s.targets[i]) {
            req = Request{static_cast<int>(i), ns.t, ns.t + duration.duration, 0.0, 0.0, 0.0};
            continue;
        }
        if (auto renewed = renew_request(req, ns.t, s.x[i], ns.x[i], ns.targets[i], duration)) {
            req = *renewed;
        }
    }
    refresh_laxities(fleet, ns);
    return ns;
}

// ---------------------------------------------------------------------------
// Metrics and traces

Metrics metrics(std::span<const TraceRow> trace, double dt) {
    if (trace.empty()) {
        throw PreconditionError("metrics: empty trace");
    }
    Metrics m;
    double deviation = 0.0;
    std::size_t count = 0;
    for (const auto& row : trace) {
        for (std::size_t i = 0; i < row.x.size(); ++i) {
            deviation += std::abs(row.x[i] - row.target[i]);
            ++count;
        }
        double used = 0.0;
        for (const double u : row.u) {
            used += std::abs(u);
        }
        m.tec += row.price * used * dt;
    }
    m.atd = count == 0 ? 0.0 : deviation / static_cast<double>(count);
    return m;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
    const std::size_t n = trace.empty() ? 0 : trace.front().x.size();
    out << "t,price,x_out,power";
    for (const char* col : {"x", "u", "laxity", "target"}) {
        for (std::size_t i = 0; i < n; ++i) {
            out << ',' << col << '_' << i;
        }
    }
    out << '\n';
    out << std::setprecision(17);
    for (const auto& row : trace) {
        out << row.t << ',' << row.price << ',' << row.x_out << ',' << row.power;
        for (const auto* v : {&row.x, &row.u, &row.laxity, &row.target}) {
            for (const double d : *v) {
                out << ',' << d;
            }
        }
        out << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("trace: missing header");
    }
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 4 || (columns - 4) % 4 != 0 || line.rfind("t,price,x_out,power", 0) != 0) {
        throw DataError("trace: unexpected header");
    }
    const std::size_t n = (columns - 4) / 4;
    std::vector<TraceRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<double> values;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
            } catch (const std::exception&) {
                throw DataError("trace: row " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (values.size() != columns) {
            throw DataError("trace: row " + std::to_string(lineno) + ": expected " +
                            std::to_string(columns) + " fields");
        }
        TraceRow r;
        r.t = static_cast<int>(values[0]);
        r.price = values[1];
        r.x_out = values[2];
        r.power = values[3];
        auto take = [&](std::size_t block) {
            const auto first = values.begin() + static_cast<std::ptrdiff_t>(4 + block * n);
            return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n));
        };
        r.x = take(0);
        r.u = take(1);
        r.laxity = take(2);
        r.target = take(3);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Environment

Environment::Environment(EnvConfig cfg, ExogenousSeries exo)
    : cfg_(std::move(cfg)), exo_(std::move(exo)), fleet_(cfg_.fleet) {
    exo_.validate();
    cfg_.reward.validate();
    if (cfg_.episode_length < 1) {
        throw ConfigError("episode_length: must be >= 1");
    }
    if (cfg_.duration.duration < 1) {
        throw ConfigError("duration: must be >= 1");
    }
    if (exo_.size() < static_cast<std::size_t>(cfg_.episode_length)) {
        throw ConfigError("exogenous series shorter than one episode (" +
                          std::to_string(exo_.size()) + " < " +
                          std::to_string(cfg_.episode_length) + ")");
    }
    if (!cfg_.target_schedule.empty() &&
        cfg_.target_schedule.size() < static_cast<std::size_t>(cfg_.episode_length)) {
        throw ConfigError("target_schedule: does not cover the episode");
    }
    if (cfg_.x0.empty()) {
        for (std::size_t i = 0; i < fleet_.size(); ++i) {
            cfg_.x0.push_back(fleet_.base_target(i));
        }
    }
    if (cfg_.x0.size() != fleet_.size()) {
        throw ConfigError("x0: expected " + std::to_string(fleet_.size()) + " temperatures");
    }
    bounds_ = cfg_.bounds;
    if (bounds_.hi < bounds_.lo) {
        bounds_ = {0.0, fleet_.total_u_max()};
    }
    reset(0);
}

std::size_t Environment::episode_starts() const noexcept {
    return exo_.size() - static_cast<std::size_t>(cfg_.episode_length) + 1;
}

Exogenous Environment::exogenous_at(int t) const {
    const auto k = std::min(offset_ + static_cast<std::size_t>(std::max(0, t)), exo_.size() - 1);
    return {exo_.price[k], exo_.x_out[k]};
}

std::vector<double> Environment::targets_at(int t) const {
    std::vector<double> out(fleet_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (cfg_.target_schedule.empty()) {
            out[i] = fleet_.base_target(i);
        } else {
            const auto k = std::min(static_cast<std::size_t>(std::max(0, t)),
                                    cfg_.target_schedule.size() - 1);
            out[i] = cfg_.target_schedule[k];
        }
    }
    return out;
}

const FleetState& Environment::reset(std::size_t offset) {
    if (offset >= episode_starts()) {
        throw PreconditionError("Environment::reset: offset " + std::to_string(offset) +
                                " leaves less than one episode of data");
    }
    offset_ = offset;
    const auto exo = exogenous_at(0);
    state_ = FleetState{};
    state_.t = 0;
    state_.price = exo.price;
    state_.x_out = exo.x_out;
    state_.x = cfg_.x0;
    state_.targets = targets_at(0);
    for (std::size_t i = 0; i < fleet_.size(); ++i) {
        state_.requests.push_back(
            Request{static_cast<int>(i), 0, cfg_.duration.duration, 0.0, 0.0, 0.0});
    }
    refresh_laxities(fleet_, state_);
    trace_.clear();
    return state_;
}

StepOutcome Environment::step(double power) {
    if (done()) {
        throw PreconditionError("Environment::step: episode is over");
    }
    const int t = state_.t;
    const auto targets = targets_at(t + 1);
    auto out = env_step(fleet_, state_, power, exogenous_at(t + 1), targets, bounds_,
                        cfg_.duration, cfg_.reward);
    record(out);
    return out;
}

StepOutcome Environment::step_units(std::span<const double> u) {
    if (done()) {
        throw PreconditionError("Environment::step_units: episode is over");
    }
    if (u.size() != fleet_.size()) {
        throw PreconditionError("Environment::step_units: one power per unit expected");
    }
    const int t = state_.t;
    StepOutcome out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            throw PreconditionError("Environment::step_units: power is not finite");
        }
        const double cap = fleet_.u_max(i);
        out.u.push_back(std::clamp(u[i], -cap, cap));
        out.power += std::abs(out.u.back());
    }
    out.reward = reward(state_, out.power, cfg_.reward);
    out.next = advance_fleet(fleet_, state_, out.u, exogenous_at(t + 1), targets_at(t + 1),
                             cfg_.duration);
    record(out);
    return out;
}

void Environment::record(const StepOutcome& out) {
    TraceRow row;
    row.t = state_.t;
    row.price = state_.price;
    row.x_out = state_.x_out;
    row.power = out.power;
    row.x = state_.x;
    row.u = out.u;
    row.target = state_.targets;
    for (const auto& r : state_.requests) {
        row.laxity.push_back(r.laxity);
    }
    trace_.push_back(std::move(row));
    state_ = out.next;
}

}  // namespace laxhvac
