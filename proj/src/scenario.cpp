#include "laxhvac/scenario.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <type_traits>

namespace laxhvac {

using nlohmann::json;

namespace {

// Typed access into a JSON tree that remembers where it is.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return j_; }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    Node child(const std::string& key) const {
        if (!has(key)) {
            fail(key, "required field is missing");
        }
        return Node(j_.at(key), join(key));
    }

    Node item(std::size_t k) const {
        return Node(j_.at(k), path_ + "[" + std::to_string(k) + "]");
    }

    void expect_object() const {
        if (!j_.is_object()) {
            throw ConfigError(where() + "expected an object");
        }
    }

    std::size_t expect_array() const {
        if (!j_.is_array()) {
            throw ConfigError(where() + "expected an array");
        }
        return j_.size();
    }

    void only(std::initializer_list<const char*> keys) const {
        expect_object();
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : j_.items()) {
            if (allowed.count(key) == 0) {
                fail(key, "unknown field");
            }
        }
    }

    double number() const {
        if (!j_.is_number()) {
            throw ConfigError(where() + "expected a number");
        }
        return j_.get<double>();
    }

    long long integer() const {
        if (!j_.is_number_integer()) {
            throw ConfigError(where() + "expected an integer");
        }
        return j_.get<long long>();
    }

    std::string text() const {
        if (!j_.is_string()) {
            throw ConfigError(where() + "expected a string");
        }
        return j_.get<std::string>();
    }

    bool flag() const {
        if (!j_.is_boolean()) {
            throw ConfigError(where() + "expected true or false");
        }
        return j_.get<bool>();
    }

    void read(const std::string& key, double& v) const {
        if (has(key)) v = child(key).number();
    }
    void read(const std::string& key, int& v) const {
        if (has(key)) v = static_cast<int>(checked(key, INT32_MIN, INT32_MAX));
    }
    template <class U>
        requires(std::is_unsigned_v<U> && !std::is_same_v<U, bool>)
    void read(const std::string& key, U& v) const {
        if (has(key)) v = static_cast<U>(checked(key, 0, INT64_MAX));
    }
    void read(const std::string& key, std::int64_t& v) const {
        if (has(key)) v = static_cast<std::int64_t>(checked(key, INT64_MIN, INT64_MAX));
    }
    void read(const std::string& key, bool& v) const {
        if (has(key)) v = child(key).flag();
    }
    void read(const std::string& key, std::string& v) const {
        if (has(key)) v = child(key).text();
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(join(key) + ": " + what);
    }

private:
    long long checked(const std::string& key, long long lo, long long hi) const {
        const auto v = child(key).integer();
        if (v < lo || v > hi) {
            fail(key, "value out of range");
        }
        return v;
    }
    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }
    std::string where() const { return (path_.empty() ? std::string("<root>") : path_) + ": "; }

    const json& j_;
    std::string path_;
};

// Wraps a validate() call so its message carries the field path.
template <class F>
void check_at(const std::string& path, F&& f) {
    try {
        f();
    } catch (const PreconditionError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ZoneParams read_zone(const Node& n, double dt) {
    n.only({"a", "b", "x_lo", "x_hi", "x_target", "u_max"});
    ZoneParams z;
    n.read("a", z.a);
    n.read("b", z.b);
    n.read("x_lo", z.x_lo);
    n.read("x_hi", z.x_hi);
    n.read("x_target", z.x_target);
    n.read("u_max", z.u_max);
    z.dt = dt;
    check_at(n.path(), [&] { z.validate(); });
    return z;
}

BuildingParams read_building(const Node& n, double dt) {
    n.only({"zones", "coupling", "substeps"});
    BuildingParams b;
    b.dt = dt;
    n.read("substeps", b.substeps);
    const auto zones = n.child("zones");
    for (std::size_t k = 0; k < zones.expect_array(); ++k) {
        const auto z = zones.item(k);
        z.only({"capacity", "resistance", "efficiency", "x_lo", "x_hi", "x_target", "u_max"});
        BuildingZone bz;
        z.read("capacity", bz.capacity);
        z.read("resistance", bz.resistance);
        z.read("efficiency", bz.efficiency);
        z.read("x_lo", bz.x_lo);
        z.read("x_hi", bz.x_hi);
        z.read("x_target", bz.x_target);
        z.read("u_max", bz.u_max);
        b.zones.push_back(bz);
    }
    const auto n_zones = static_cast<Eigen::Index>(b.zones.size());
    b.coupling = Eigen::MatrixXd::Zero(n_zones, n_zones);
    if (n.has("coupling")) {
        const auto links = n.child("coupling");
        for (std::size_t k = 0; k < links.expect_array(); ++k) {
            const auto l = links.item(k);
            l.only({"i", "j", "resistance"});
            int i = 0, j = 0;
            double r = 0.0;
            l.read("i", i);
            l.read("j", j);
            r = l.child("resistance").number();
            if (i < 0 || j < 0 || i >= n_zones || j >= n_zones || i == j) {
                throw ConfigError(l.path() + ": zone indices must differ and lie in [0, " +
                                  std::to_string(n_zones) + ")");
            }
            if (!(r > 0.0)) {
                throw ConfigError(l.path() + ".resistance: must be > 0");
            }
            b.coupling(i, j) = b.coupling(j, i) = r;
        }
    }
    check_at(n.path(), [&] { b.validate(); });
    return b;
}

void read_train(const Node& n, rl::TrainConfig& t) {
    n.only({"episodes", "hidden", "hidden_layers", "actor_lr", "critic_lr", "rho", "buffer",
            "batch", "warmup_steps", "noise_start", "noise_end", "updates_per_step",
            "random_offsets", "reward_scale", "seed"});
    n.read("episodes", t.episodes);
    n.read("hidden", t.ddpg.hidden);
    n.read("hidden_layers", t.ddpg.hidden_layers);
    n.read("actor_lr", t.ddpg.actor_lr);
    n.read("critic_lr", t.ddpg.critic_lr);
    n.read("rho", t.ddpg.rho);
    n.read("buffer", t.buffer);
    n.read("batch", t.batch);
    n.read("warmup_steps", t.warmup_steps);
    n.read("noise_start", t.noise_start);
    n.read("noise_end", t.noise_end);
    n.read("updates_per_step", t.updates_per_step);
    n.read("random_offsets", t.random_offsets);
    n.read("reward_scale", t.reward_scale);
    n.read("seed", t.seed);
}

json train_json(const rl::TrainConfig& t) {
    return {{"episodes", t.episodes},
            {"hidden", t.ddpg.hidden},
            {"hidden_layers", t.ddpg.hidden_layers},
            {"actor_lr", t.ddpg.actor_lr},
            {"critic_lr", t.ddpg.critic_lr},
            {"rho", t.ddpg.rho},
            {"buffer", t.buffer},
            {"batch", t.batch},
            {"warmup_steps", t.warmup_steps},
            {"noise_start", t.noise_start},
            {"noise_end", t.noise_end},
            {"updates_per_step", t.updates_per_step},
            {"random_offsets", t.random_offsets},
            {"reward_scale", t.reward_scale},
            {"seed", t.seed}};
}

void validate_train(const std::string& path, const rl::TrainConfig& t) {
    auto bad = [&](const std::string& field, const std::string& what) {
        throw ConfigError(path + "." + field + ": " + what);
    };
    if (t.episodes < 0) bad("episodes", "must be >= 0");
    if (t.ddpg.hidden < 1) bad("hidden", "must be >= 1");
    if (t.ddpg.hidden_layers < 1) bad("hidden_layers", "must be >= 1");
    if (!(t.ddpg.actor_lr > 0.0)) bad("actor_lr", "must be > 0");
    if (!(t.ddpg.critic_lr > 0.0)) bad("critic_lr", "must be > 0");
    if (!(t.ddpg.rho > 0.0 && t.ddpg.rho <= 1.0)) bad("rho", "must lie in (0, 1]");
    if (t.buffer < 1) bad("buffer", "must be >= 1");
    if (t.batch < 1) bad("batch", "must be >= 1");
    if (t.warmup_steps < 0) bad("warmup_steps", "must be >= 0");
    if (t.noise_start < 0.0 || t.noise_end < 0.0) bad("noise_start", "noise must be >= 0");
    if (t.updates_per_step < 0) bad("updates_per_step", "must be >= 0");
    if (!(t.reward_scale > 0.0) || !std::isfinite(t.reward_scale)) bad("reward_scale", "must be > 0");
}

json synth_json(const SynthSpec& s) {
    return {{"hours", s.hours},
            {"start", format_timestamp(s.start)},
            {"step_hours", s.step_hours},
            {"temp_mean", s.temp_mean},
            {"temp_amplitude", s.temp_amplitude},
            {"temp_peak_hour", s.temp_peak_hour},
            {"temp_noise", s.temp_noise},
            {"price_base", s.price_base},
            {"price_peak", s.price_peak},
            {"morning_peak_hour", s.morning_peak_hour},
            {"evening_peak_hour", s.evening_peak_hour},
            {"peak_width", s.peak_width},
            {"price_noise", s.price_noise},
            {"day_shift", s.day_shift}};
}

void read_synth(const Node& n, SynthSpec& s) {
    n.only({"hours", "start", "step_hours", "temp_mean", "temp_amplitude", "temp_peak_hour",
            "temp_noise", "price_base", "price_peak", "morning_peak_hour", "evening_peak_hour",
            "peak_width", "price_noise", "day_shift"});
    n.read("hours", s.hours);
    if (n.has("start")) {
        const auto c = n.child("start");
        try {
            s.start = c.raw().is_string() ? parse_timestamp(c.text()) : c.integer();
        } catch (const DataError& e) {
            throw ConfigError(c.path() + ": " + e.what());
        }
    }
    n.read("step_hours", s.step_hours);
    n.read("temp_mean", s.temp_mean);
    n.read("temp_amplitude", s.temp_amplitude);
    n.read("temp_peak_hour", s.temp_peak_hour);
    n.read("temp_noise", s.temp_noise);
    n.read("price_base", s.price_base);
    n.read("price_peak", s.price_peak);
    n.read("morning_peak_hour", s.morning_peak_hour);
    n.read("evening_peak_hour", s.evening_peak_hour);
    n.read("peak_width", s.peak_width);
    n.read("price_noise", s.price_noise);
    n.read("day_shift", s.day_shift);
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(n.path() + ": " + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void Scenario::validate() const {
    if (episode_length < 1) {
        throw ConfigError("episode_length: must be >= 1");
    }
    if (!(dt > 0.0)) {
        throw ConfigError("dt: must be > 0");
    }
    if (fleet.size() == 0) {
        throw ConfigError("fleet: at least one zone or building is required");
    }
    for (std::size_t k = 0; k < fleet.zones.size(); ++k) {
        check_at("fleet.zones[" + std::to_string(k) + "]", [&] { fleet.zones[k].validate(); });
    }
    for (std::size_t k = 0; k < fleet.buildings.size(); ++k) {
        check_at("fleet.buildings[" + std::to_string(k) + "]",
                 [&] { fleet.buildings[k].validate(); });
    }
    if (!x0.empty() && x0.size() != fleet.size()) {
        throw ConfigError("x0: expected " + std::to_string(fleet.size()) + " values, found " +
                          std::to_string(x0.size()));
    }
    if (duration.duration < 1) {
        throw ConfigError("duration: must be >= 1");
    }
    if (bounds.lo < 0.0) {
        throw ConfigError("power_bounds.lo: must be >= 0");
    }
    if (bounds.hi >= 0.0 && bounds.hi < bounds.lo) {
        throw ConfigError("power_bounds.hi: must be >= power_bounds.lo");
    }
    try {
        reward.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("reward: ") + e.what());
    }
    for (std::size_t k = 0; k < target_schedule.size(); ++k) {
        const auto& seg = target_schedule[k];
        const std::string at = "target_schedule[" + std::to_string(k) + "]";
        if (!(seg.hour >= 0.0 && seg.hour < 168.0)) {
            throw ConfigError(at + ".hour: must lie in [0, 168)");
        }
        if (k > 0 && !(seg.hour > target_schedule[k - 1].hour)) {
            throw ConfigError(at + ".hour: hours must increase");
        }
        if (k == 0 && seg.hour != 0.0) {
            throw ConfigError(at + ".hour: the schedule must start at hour 0 to cover the horizon");
        }
        if (!std::isfinite(seg.target)) {
            throw ConfigError(at + ".target: must be finite");
        }
    }
    validate_train("train", train);
    validate_train("centralized", centralized);
    try {
        mpc.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(e.what());
    }
    if (exogenous.csv.empty()) {
        try {
            exogenous.synthetic.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("exogenous.") + e.what());
        }
    }
    if (eval_offsets.empty()) {
        throw ConfigError("eval_offsets: at least one offset is required");
    }
}

std::vector<double> Scenario::expand_schedule() const {
    std::vector<double> out;
    if (target_schedule.empty()) {
        return out;
    }
    for (int t = 0; t <= episode_length; ++t) {
        const double hour = std::fmod(t * dt, 168.0);
        double target = target_schedule.front().target;
        for (const auto& seg : target_schedule) {
            if (seg.hour <= hour + 1e-9) {
                target = seg.target;
            }
        }
        out.push_back(target);
    }
    return out;
}

EnvConfig Scenario::env_config() const {
    validate();
    EnvConfig cfg;
    cfg.fleet = fleet;
    for (auto& z : cfg.fleet.zones) {
        z.dt = dt;
    }
    for (auto& b : cfg.fleet.buildings) {
        b.dt = dt;
    }
    cfg.x0 = x0;
    cfg.episode_length = episode_length;
    cfg.duration = duration;
    cfg.reward = reward;
    cfg.bounds = bounds;
    cfg.target_schedule = expand_schedule();
    return cfg;
}

ExogenousSeries Scenario::load_exogenous(const std::string& base_dir) const {
    ExogenousSeries series;
    if (exogenous.csv.empty()) {
        series = synth_series(exogenous.synthetic,
                              exogenous.synthetic_seed == 0 ? seed : exogenous.synthetic_seed);
    } else {
        std::filesystem::path p(exogenous.csv);
        if (p.is_relative()) {
            p = std::filesystem::path(base_dir) / p;
        }
        series = load_csv(p.string(), exogenous.columns, dt);
    }
    if (!exogenous.from.empty() || !exogenous.to.empty()) {
        const auto from = exogenous.from.empty() ? INT64_MIN : parse_timestamp(exogenous.from);
        const auto to = exogenous.to.empty() ? INT64_MAX : parse_timestamp(exogenous.to);
        series = slice(series, from, to);
    }
    if (series.size() < static_cast<std::size_t>(episode_length)) {
        throw DataError("exogenous data has " + std::to_string(series.size()) +
                        " points, fewer than one episode (" + std::to_string(episode_length) + ")");
    }
    return series;
}

Scenario scenario_from_json(const json& j) {
    const Node root(j, "");
    root.only({"name", "seed", "episode_length", "dt", "fleet", "x0", "power_bounds", "duration",
               "reward", "target_schedule", "exogenous", "train", "centralized", "mpc",
               "eval_offsets"});
    Scenario s;
    root.read("name", s.name);
    root.read("seed", s.seed);
    root.read("episode_length", s.episode_length);
    root.read("dt", s.dt);
    if (!(s.dt > 0.0)) {
        throw ConfigError("dt: must be > 0");
    }

    const auto fleet = root.child("fleet");
    fleet.only({"zones", "buildings"});
    if (fleet.has("zones")) {
        const auto zones = fleet.child("zones");
        for (std::size_t k = 0; k < zones.expect_array(); ++k) {
            s.fleet.zones.push_back(read_zone(zones.item(k), s.dt));
        }
    }
    if (fleet.has("buildings")) {
        const auto bs = fleet.child("buildings");
        for (std::size_t k = 0; k < bs.expect_array(); ++k) {
            s.fleet.buildings.push_back(read_building(bs.item(k), s.dt));
        }
    }
    if (root.has("x0")) {
        const auto x0 = root.child("x0");
        for (std::size_t k = 0; k < x0.expect_array(); ++k) {
            s.x0.push_back(x0.item(k).number());
        }
    }
    if (root.has("power_bounds")) {
        const auto b = root.child("power_bounds");
        b.only({"lo", "hi"});
        b.read("lo", s.bounds.lo);
        b.read("hi", s.bounds.hi);
    }
    root.read("duration", s.duration.duration);
    if (root.has("reward")) {
        const auto r = root.child("reward");
        r.only({"alpha", "beta", "gamma"});
        r.read("alpha", s.reward.alpha);
        r.read("beta", s.reward.beta);
        r.read("gamma", s.reward.gamma);
    }
    if (root.has("target_schedule")) {
        const auto ts = root.child("target_schedule");
        for (std::size_t k = 0; k < ts.expect_array(); ++k) {
            const auto seg = ts.item(k);
            seg.only({"hour", "target"});
            s.target_schedule.push_back({seg.child("hour").number(), seg.child("target").number()});
        }
    }
    if (root.has("exogenous")) {
        const auto e = root.child("exogenous");
        e.only({"csv", "columns", "from", "to", "synthetic", "synthetic_seed"});
        e.read("csv", s.exogenous.csv);
        if (e.has("columns")) {
            const auto c = e.child("columns");
            c.only({"timestamp", "price", "x_out"});
            c.read("timestamp", s.exogenous.columns.timestamp);
            c.read("price", s.exogenous.columns.price);
            c.read("x_out", s.exogenous.columns.x_out);
        }
        for (const char* key : {"from", "to"}) {
            if (e.has(key)) {
                const auto v = e.child(key).text();
                try {
                    parse_timestamp(v);
                } catch (const DataError& err) {
                    e.fail(key, err.what());
                }
                (std::string(key) == "from" ? s.exogenous.from : s.exogenous.to) = v;
            }
        }
        if (e.has("synthetic")) {
            read_synth(e.child("synthetic"), s.exogenous.synthetic);
        }
        e.read("synthetic_seed", s.exogenous.synthetic_seed);
    }
    s.train.seed = s.seed;
    if (root.has("train")) {
        read_train(root.child("train"), s.train);
    }
    s.train.ddpg.gamma = s.reward.gamma;
    s.centralized = s.train;
    if (root.has("centralized")) {
        read_train(root.child("centralized"), s.centralized);
    }
    s.centralized.ddpg.gamma = s.reward.gamma;
    if (root.has("mpc")) {
        const auto m = root.child("mpc");
        m.only({"horizon", "receding", "band_penalty", "energy_weight", "deviation_weight"});
        m.read("horizon", s.mpc.horizon);
        m.read("receding", s.mpc.receding);
        m.read("band_penalty", s.mpc.band_penalty);
        m.read("energy_weight", s.mpc.energy_weight);
        m.read("deviation_weight", s.mpc.deviation_weight);
        try {
            s.mpc.validate();
        } catch (const ConfigError& err) {
            throw ConfigError(std::string(err.what()));
        }
    }
    if (root.has("eval_offsets")) {
        const auto o = root.child("eval_offsets");
        s.eval_offsets.clear();
        for (std::size_t k = 0; k < o.expect_array(); ++k) {
            const auto v = o.item(k).integer();
            if (v < 0) {
                throw ConfigError(o.path() + "[" + std::to_string(k) + "]: must be >= 0");
            }
            s.eval_offsets.push_back(static_cast<std::size_t>(v));
        }
    }
    s.validate();
    return s;
}

json to_json(const Scenario& s) {
    json zones = json::array();
    for (const auto& z : s.fleet.zones) {
        zones.push_back({{"a", z.a},
                         {"b", z.b},
                         {"x_lo", z.x_lo},
                         {"x_hi", z.x_hi},
                         {"x_target", z.x_target},
                         {"u_max", z.u_max}});
    }
    json buildings = json::array();
    for (const auto& b : s.fleet.buildings) {
        json bz = json::array();
        for (const auto& z : b.zones) {
            bz.push_back({{"capacity", z.capacity},
                          {"resistance", z.resistance},
                          {"efficiency", z.efficiency},
                          {"x_lo", z.x_lo},
                          {"x_hi", z.x_hi},
                          {"x_target", z.x_target},
                          {"u_max", z.u_max}});
        }
        json links = json::array();
        for (Eigen::Index i = 0; i < b.coupling.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < b.coupling.cols(); ++j) {
                if (b.coupling(i, j) > 0.0) {
                    links.push_back({{"i", i}, {"j", j}, {"resistance", b.coupling(i, j)}});
                }
            }
        }
        buildings.push_back({{"zones", bz}, {"coupling", links}, {"substeps", b.substeps}});
    }
    json schedule = json::array();
    for (const auto& seg : s.target_schedule) {
        schedule.push_back({{"hour", seg.hour}, {"target", seg.target}});
    }
    json exo = {{"csv", s.exogenous.csv},
                {"columns",
                 {{"timestamp", s.exogenous.columns.timestamp},
                  {"price", s.exogenous.columns.price},
                  {"x_out", s.exogenous.columns.x_out}}},
                {"synthetic", synth_json(s.exogenous.synthetic)},
                {"synthetic_seed", s.exogenous.synthetic_seed}};
    if (!s.exogenous.from.empty()) {
        exo["from"] = s.exogenous.from;
    }
    if (!s.exogenous.to.empty()) {
        exo["to"] = s.exogenous.to;
    }
    return {{"name", s.name},
            {"seed", s.seed},
            {"episode_length", s.episode_length},
            {"dt", s.dt},
            {"fleet", {{"zones", zones}, {"buildings", buildings}}},
            {"x0", s.x0},
            {"power_bounds", {{"lo", s.bounds.lo}, {"hi", s.bounds.hi}}},
            {"duration", s.duration.duration},
            {"reward", {{"alpha", s.reward.alpha}, {"beta", s.reward.beta}, {"gamma", s.reward.gamma}}},
            {"target_schedule", schedule},
            {"exogenous", exo},
            {"train", train_json(s.train)},
            {"centralized", train_json(s.centralized)},
            {"mpc",
             {{"horizon", s.mpc.horizon},
              {"receding", s.mpc.receding},
              {"band_penalty", s.mpc.band_penalty},
              {"energy_weight", s.mpc.energy_weight},
              {"deviation_weight", s.mpc.deviation_weight}}},
            {"eval_offsets", s.eval_offsets}};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << to_json(s).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Presets

namespace {

Scenario base_preset(const std::string& name) {
    Scenario s;
    s.name = name;
    s.seed = 1;
    s.bounds = PowerBounds{0.0, -1.0};
    s.duration.duration = 24;
    s.exogenous.synthetic = SynthSpec{};
    s.train.episodes = 150;
    s.train.warmup_steps = 500;
    s.centralized = s.train;
    // Full-state rewards are summed over units and much larger per step.
    s.centralized.reward_scale = 0.1;
    return s;
}

}  // namespace

Scenario preset(const std::string& name) {
    if (name == "single-zone") {
        auto s = base_preset(name);
        for (int i = 0; i < 10; ++i) {
            ZoneParams z;
            z.a = 0.08 + 0.005 * i;
            z.b = 0.45 + 0.01 * (i % 4);
            z.u_max = 6.0;
            s.fleet.zones.push_back(z);
            s.x0.push_back(16.0 + 0.5 * i);
        }
        s.eval_offsets = {24 * 24};
        s.validate();
        return s;
    }
    if (name == "multi-zone") {
        auto s = base_preset(name);
        for (int k = 0; k < 10; ++k) {
            BuildingParams b;
            for (int z = 0; z < 3; ++z) {
                b.zones.push_back(BuildingZone{2.0 + 0.1 * z, 2.5 + 0.05 * k, 3.0, 19.0, 23.0, 21.0, 8.0});
                s.x0.push_back(16.5 + 0.3 * k + 0.5 * z);
            }
            b.coupling = Eigen::MatrixXd::Zero(3, 3);
            b.coupling(0, 1) = b.coupling(1, 0) = 2.0;
            b.coupling(1, 2) = b.coupling(2, 1) = 2.0;
            s.fleet.buildings.push_back(b);
        }
        s.eval_offsets = {24 * 24};
        s.validate();
        return s;
    }
    if (name == "week-long") {
        auto s = base_preset(name);
        s.episode_length = 168;
        s.exogenous.synthetic.hours = 168 * 4;
        s.exogenous.synthetic.temp_mean = 22.0;
        s.exogenous.synthetic.temp_amplitude = 7.0;
        for (int i = 0; i < 10; ++i) {
            ZoneParams z;
            z.a = 0.08 + 0.005 * i;
            z.b = 0.45 + 0.01 * (i % 4);
            z.u_max = 6.0;
            z.x_lo = 20.0;
            z.x_target = 22.0;
            z.x_hi = 24.0;
            s.fleet.zones.push_back(z);
            s.x0.push_back(24.0 + 0.3 * i);
        }
        for (int day = 0; day < 7; ++day) {
            const double base = 24.0 * day;
            const bool weekend = day >= 5;
            s.target_schedule.push_back({base, 23.0});
            s.target_schedule.push_back({base + 7.0, weekend ? 22.5 : 22.0});
            s.target_schedule.push_back({base + 22.0, 23.0});
        }
        s.eval_offsets = {168 * 3};
        s.validate();
        return s;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"single-zone", "multi-zone", "week-long"}; }

}  // namespace laxhvac
