#pragma once

#include "laxhvac/baselines.hpp"
#include "laxhvac/env.hpp"
#include "laxhvac/io.hpp"
#include "laxhvac/rl.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace laxhvac {

/// One piece of a weekly target schedule: from `hour` (hours since the
/// episode start, modulo 168) every unit aims at `target`.
struct TargetSegment {
    double hour = 0.0;
    double target = 21.0;

    bool operator==(const TargetSegment&) const = default;
};

struct ExogenousSource {
    std::string csv;  ///< empty selects the synthetic generator
    ColumnMap columns;
    std::string from;  ///< optional slice bounds, parse_timestamp syntax
    std::string to;
    SynthSpec synthetic;
    std::uint64_t synthetic_seed = 0;  ///< 0 reuses the scenario seed
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    int episode_length = 96;
    double dt = 1.0;
    FleetSpec fleet;
    std::vector<double> x0;
    PowerBounds bounds{0.0, -1.0};
    DurationConfig duration;
    RewardConfig reward;
    std::vector<TargetSegment> target_schedule;
    ExogenousSource exogenous;
    rl::TrainConfig train;
    rl::TrainConfig centralized;
    MpcConfig mpc;
    std::vector<std::size_t> eval_offsets{0};

    /// Throws ConfigError with the path of the first offending field.
    void validate() const;
    /// Per-step targets for one episode (empty without a schedule).
    std::vector<double> expand_schedule() const;
    EnvConfig env_config() const;
    /// Loads or generates the exogenous data. Relative CSV paths resolve
    /// against `base_dir`.
    ExogenousSeries load_exogenous(const std::string& base_dir = ".") const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// Built-in synthetic scenarios: "single-zone" (10 units, 96-step episodes),
/// "multi-zone" (10 three-zone buildings) and "week-long" (10 units, one
/// 168-step episode with a time-varying target).
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace laxhvac
