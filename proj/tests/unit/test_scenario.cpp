#include "laxhvac/error.hpp"
#include "laxhvac/pipeline.hpp"
#include "laxhvac/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace laxhvac;
using nlohmann::json;

namespace {

std::string config_error(const json& j) {
    try {
        scenario_from_json(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("presets validate and survive a json round trip") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto s = preset(name);
        CHECK_NOTHROW(s.validate());
        const json j = to_json(s);
        CHECK(to_json(scenario_from_json(j)) == j);
    }
    CHECK_THROWS_AS(preset("no-such-preset"), ConfigError);
}

TEST_CASE("partial config fills defaults and echoes them") {
    const json j = json::parse(R"({
        "name": "tiny",
        "seed": 4,
        "episode_length": 12,
        "fleet": {"zones": [{"a": 0.1, "b": 0.5, "u_max": 6}]},
        "exogenous": {"synthetic": {"hours": 48}}
    })");
    const auto s = scenario_from_json(j);
    CHECK(s.name == "tiny");
    CHECK(s.episode_length == 12);
    REQUIRE(s.fleet.zones.size() == 1);
    CHECK(s.fleet.zones[0].u_max == 6.0);
    CHECK(s.exogenous.synthetic.hours == 48);
    const json full = to_json(s);
    CHECK(full.contains("train"));
    CHECK(full["train"].contains("actor_lr"));
    CHECK(to_json(scenario_from_json(full)) == full);
    // Centralized settings default to a copy of the proposed ones.
    CHECK(full["centralized"] == full["train"]);
}

TEST_CASE("config errors carry the field path") {
    json j = to_json(preset("single-zone"));
    j["fleet"]["zones"][3]["u_max"] = -1;
    CHECK(config_error(j).rfind("fleet.zones[3]", 0) == 0);

    j = to_json(preset("single-zone"));
    j["train"]["bogus"] = 1;
    CHECK(config_error(j).rfind("train.bogus", 0) == 0);

    j = to_json(preset("single-zone"));
    j["episode_length"] = "x";
    CHECK(config_error(j).rfind("episode_length", 0) == 0);

    j = to_json(preset("single-zone"));
    j["episode_length"] = 0;
    CHECK(config_error(j).find("episode_length") != std::string::npos);

    j = to_json(preset("single-zone"));
    j["centralized"]["reward_scale"] = 0;
    CHECK(config_error(j).rfind("centralized.reward_scale", 0) == 0);

    j = to_json(preset("single-zone"));
    j["x0"] = json::array({1.0});
    CHECK(config_error(j).rfind("x0", 0) == 0);

    j = to_json(preset("multi-zone"));
    j["fleet"]["buildings"][1]["coupling"][0]["j"] = 7;
    CHECK(config_error(j).rfind("fleet.buildings[1].coupling[0]", 0) == 0);
}

TEST_CASE("weekly schedule expands relative to the episode start") {
    Scenario s = preset("single-zone");
    s.episode_length = 200;
    s.target_schedule = {{0.0, 20.0}, {6.0, 21.0}, {18.0, 19.5}};
    const auto t = s.expand_schedule();
    REQUIRE(t.size() == 201);
    CHECK(t[0] == 20.0);
    CHECK(t[5] == 20.0);
    CHECK(t[6] == 21.0);
    CHECK(t[17] == 21.0);
    CHECK(t[18] == 19.5);
    CHECK(t[167] == 19.5);
    CHECK(t[168] == 20.0);
    CHECK(t[174] == 21.0);

    s.target_schedule = {{10.0, 22.0}, {5.0, 21.0}};
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("scenario files load with comments and relative csv paths") {
    const auto dir = std::filesystem::temp_directory_path() / "laxhvac_scenario_test";
    std::filesystem::create_directories(dir);
    std::filesystem::copy_file(LAXHVAC_FIXTURE_DIR "/exogenous_feb.csv", dir / "data.csv",
                               std::filesystem::copy_options::overwrite_existing);
    {
        std::ofstream f(dir / "s.json");
        f << R"({
            // four days of fixture data
            "episode_length": 24,
            "fleet": {"zones": [{"a": 0.1, "b": 0.5, "u_max": 6}]},
            "exogenous": {
                "csv": "data.csv",
                "columns": {"price": "price_eur_kwh", "x_out": "temp_c"},
                "from": "2023-02-01", "to": "2023-02-05"
            }
        })";
    }
    const auto s = load_scenario((dir / "s.json").string());
    const auto exo = s.load_exogenous(dir.string());
    CHECK(exo.size() == 96);

    save_scenario(s, (dir / "echo.json").string());
    CHECK(to_json(load_scenario((dir / "echo.json").string())) == to_json(s));
    std::filesystem::remove_all(dir);
}

TEST_CASE("training data stops before the first evaluation window") {
    Scenario s = preset("single-zone");
    const auto exo = s.load_exogenous();
    CHECK(training_series(s, exo).size() == s.eval_offsets.front());
    s.eval_offsets = {0};
    CHECK(training_series(s, exo).size() == exo.size());
}

TEST_CASE("convergence episode of simple curves") {
    auto curve = [](std::vector<double> r) {
        std::vector<rl::EpisodeStats> out;
        for (std::size_t k = 0; k < r.size(); ++k) {
            out.push_back({static_cast<int>(k), r[k], 0.0, 0.0});
        }
        return out;
    };
    CHECK(convergence_episode(curve(std::vector<double>(30, -100.0))) == 0);

    // A step from -200 to -100 at episode 20: the 10-wide window is within
    // 5 % of -100 once its mean is above -105, i.e. from the window ending
    // at episode 29 (all new values).
    std::vector<double> r(20, -200.0);
    r.resize(40, -100.0);
    CHECK(convergence_episode(curve(r)) == 29);
}
