// Command-line front end: simulate, train, evaluate, mpc, export-lp, verify.

#include "laxhvac/baselines.hpp"
#include "laxhvac/error.hpp"
#include "laxhvac/lp.hpp"
#include "laxhvac/pipeline.hpp"
#include "laxhvac/scenario.hpp"
#include "laxhvac/verify/acceptance.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace laxhvac;

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kData = 3, kRuntime = 4 };

struct Common {
    std::string scenario;
    std::string preset = "single-zone";
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    int episodes = -1;
};

struct Loaded {
    Scenario scenario;
    ExogenousSeries exo;
};

Loaded load(const Common& c) {
    Loaded l;
    std::string base = ".";
    if (!c.scenario.empty()) {
        l.scenario = load_scenario(c.scenario);
        base = fs::path(c.scenario).parent_path().string();
        if (base.empty()) {
            base = ".";
        }
    } else {
        l.scenario = preset(c.preset);
    }
    auto& s = l.scenario;
    if (c.seed) {
        s.train.seed = *c.seed;
        s.centralized.seed = *c.seed;
    }
    if (c.episodes >= 0) {
        s.train.episodes = c.episodes;
        s.centralized.episodes = c.episodes;
    }
    s.validate();
    l.exo = s.load_exogenous(base);
    fs::create_directories(c.out);
    save_scenario(s, (fs::path(c.out) / "scenario.json").string());
    return l;
}

std::ofstream open_out(const Common& c, const std::string& name) {
    const auto path = fs::path(c.out) / name;
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot write '" + path.string() + "'");
    }
    return f;
}

void write_trace(const Common& c, const std::string& name, const std::vector<TraceRow>& trace) {
    auto f = open_out(c, name);
    write_trace_csv(f, trace);
}

std::size_t pick_offset(const Scenario& s, long offset) {
    return offset >= 0 ? static_cast<std::size_t>(offset) : s.eval_offsets.front();
}

rl::Ddpg load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("checkpoint: cannot open '" + path + "'");
    }
    return rl::Ddpg::load(f);
}

void save_checkpoint(const Common& c, const std::string& name, const rl::Ddpg& agent) {
    std::ofstream f(fs::path(c.out) / name, std::ios::binary);
    agent.save(f);
}

void print_summary(const std::string& label, const Evaluation& e) {
    std::printf("%s offset=%zu atd=%.6f tec=%.6f reward=%.6f\n", label.c_str(), e.offset, e.metrics.atd,
                e.metrics.tec, e.reward);
}

void add_common(CLI::App* cmd, Common& c) {
    auto* sc = cmd->add_option("--scenario", c.scenario, "scenario JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", c.preset, "built-in scenario when no file is given")
        ->excludes(sc)
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--out", c.out, "output directory (scenario.json with all defaults is echoed here)");
    cmd->add_option("--seed", c.seed, "training seed (overrides the scenario)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laxity-aggregated HVAC fleet control: simulation, training and baselines"};
    app.require_subcommand(1);
    Common c;

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one episode with a constant total power or a trained agent");
    add_common(sim, c);
    std::optional<double> power;
    std::string checkpoint;
    std::string sim_method = "proposed";
    long offset = -1;
    auto* power_opt = sim->add_option("--power", power, "constant total power request (kW)");
    sim->add_option("--checkpoint", checkpoint, "agent checkpoint from `train`")->excludes(power_opt);
    sim->add_option("--method", sim_method, "agent kind of the checkpoint")
        ->check(CLI::IsMember({"proposed", "centralized"}));
    sim->add_option("--offset", offset, "episode start in the exogenous series (default: first eval offset)");

    // train
    auto* train = app.add_subcommand("train", "train an agent; writes curve.csv and a checkpoint");
    add_common(train, c);
    std::string train_method = "proposed";
    train->add_option("--method", train_method)->check(CLI::IsMember({"proposed", "centralized"}));
    train->add_option("--episodes", c.episodes, "override the configured episode count");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "ATD/TEC table for MPC, proposed and centralized");
    add_common(eval, c);
    std::string proposed_ckpt;
    std::string centralized_ckpt;
    eval->add_option("--episodes", c.episodes, "override the configured episode count");
    eval->add_option("--proposed-checkpoint", proposed_ckpt, "skip training the proposed agent");
    eval->add_option("--centralized-checkpoint", centralized_ckpt, "skip training the centralized agent");

    // mpc
    auto* mpc = app.add_subcommand("mpc", "run the model-predictive baseline for one episode");
    add_common(mpc, c);
    mpc->add_option("--offset", offset);

    // export-lp
    auto* exp = app.add_subcommand("export-lp", "write the MPC linear program in LP text form");
    add_common(exp, c);
    int horizon = 0;
    std::string lp_file = "mpc.lp";
    exp->add_option("--offset", offset);
    exp->add_option("--horizon", horizon, "steps (default: the episode length)");
    exp->add_option("--file", lp_file, "file name inside --out");

    // verify
    auto* ver = app.add_subcommand("verify", "run the acceptance property suites");
    std::vector<int> only;
    verify::AcceptanceOptions vopts;
    ver->add_option("--only", only, "criteria to run, e.g. 1,2,5")->delimiter(',');
    ver->add_option("--episodes", vopts.episodes, "training episodes for the comparison (0 = preset)");
    ver->add_option("--seed", vopts.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto l = load(c);
            const auto at = pick_offset(l.scenario, offset);
            Evaluation e;
            std::string label;
            if (!checkpoint.empty()) {
                const auto agent = load_checkpoint(checkpoint);
                e = evaluate_agent(l.scenario, l.exo, parse_method(sim_method), agent, at);
                label = sim_method;
            } else {
                e = evaluate_constant_power(l.scenario, l.exo, power.value_or(0.0), at);
                label = "constant";
            }
            write_trace(c, "trace.csv", e.trace);
            print_summary(label, e);
        } else if (*train) {
            const auto l = load(c);
            const auto m = parse_method(train_method);
            const auto r = train_agent(l.scenario, l.exo, m);
            {
                auto f = open_out(c, "curve.csv");
                rl::write_curve_csv(f, r.curve);
            }
            save_checkpoint(c, train_method + ".ckpt", r.agent);
            const auto& last = r.curve.empty() ? rl::EpisodeStats{} : r.curve.back();
            std::printf("%s episodes=%zu final_reward=%.6f convergence_episode=%d checkpoint=%s\n",
                        train_method.c_str(), r.curve.size(), last.reward, convergence_episode(r.curve),
                        (fs::path(c.out) / (train_method + ".ckpt")).string().c_str());
        } else if (*eval) {
            const auto l = load(c);
            std::vector<ComparisonRow> rows;
            for (const auto m : {Method::Mpc, Method::Proposed, Method::Centralized}) {
                const std::string name = to_string(m);
                const std::string& ckpt = m == Method::Proposed ? proposed_ckpt : centralized_ckpt;
                MethodRun run;
                if (m != Method::Mpc && !ckpt.empty()) {
                    run.method = m;
                    const auto agent = load_checkpoint(ckpt);
                    for (const auto at : l.scenario.eval_offsets) {
                        run.evaluations.push_back(evaluate_agent(l.scenario, l.exo, m, agent, at));
                        run.mean.atd += run.evaluations.back().metrics.atd / l.scenario.eval_offsets.size();
                        run.mean.tec += run.evaluations.back().metrics.tec / l.scenario.eval_offsets.size();
                    }
                } else {
                    run = run_method(l.scenario, l.exo, m);
                }
                if (!run.curve.empty()) {
                    auto f = open_out(c, "curve_" + name + ".csv");
                    rl::write_curve_csv(f, run.curve);
                    save_checkpoint(c, name + ".ckpt", *run.agent);
                }
                for (const auto& e : run.evaluations) {
                    write_trace(c, "trace_" + name + "_" + std::to_string(e.offset) + ".csv", e.trace);
                }
                rows.push_back(comparison_row(run));
            }
            {
                auto f = open_out(c, "comparison.csv");
                write_comparison_csv(f, rows);
            }
            std::printf("%-12s %12s %12s\n", "method", "ATD", "TEC");
            for (const auto& r : rows) {
                std::printf("%-12s %12.4f %12.4f\n", to_string(r.method), r.atd, r.tec);
            }
        } else if (*mpc) {
            const auto l = load(c);
            const auto at = pick_offset(l.scenario, offset);
            Environment env(l.scenario.env_config(), l.exo);
            const auto r = run_mpc(env, at, l.scenario.mpc);
            write_trace(c, "trace.csv", r.trace);
            std::printf("mpc offset=%zu atd=%.6f tec=%.6f cost=%.6f lp_objective=%.6f solves=%d iterations=%d\n",
                        at, r.metrics.atd, r.metrics.tec, r.cost, r.lp_objective, r.solves, r.iterations);
        } else if (*exp) {
            const auto l = load(c);
            const auto at = pick_offset(l.scenario, offset);
            Environment env(l.scenario.env_config(), l.exo);
            env.reset(at);
            const int h = horizon > 0 ? horizon : l.scenario.episode_length;
            const auto program = build_mpc_lp(env, h, l.scenario.mpc);
            const auto path = (fs::path(c.out) / lp_file).string();
            export_lp_text(program.lp, path);
            std::ifstream in(path);
            const auto back = read_lp_text(in);
            std::ostringstream a;
            std::ostringstream b;
            write_lp_text(a, program.lp);
            write_lp_text(b, back);
            const bool same = a.str() == b.str();
            std::printf("wrote %s: %d columns, %d rows; re-parse %s\n", path.c_str(), program.lp.num_vars(),
                        program.lp.num_rows(), same ? "identical" : "DIFFERS");
            return same ? kOk : kFailed;
        } else if (*ver) {
            vopts.log = [](const std::string& msg) { std::cerr << "  .. " << msg << std::endl; };
            const auto ids = only.empty() ? verify::criterion_ids() : only;
            int failed = 0;
            for (const int id : ids) {
                const auto r = verify::run_criterion(id, vopts);
                std::printf("[%s] criterion %d: %s | %s | %.1f s\n", r.pass ? "PASS" : "FAIL", id,
                            r.title.c_str(), r.detail.c_str(), r.seconds);
                std::fflush(stdout);
                failed += r.pass ? 0 : 1;
            }
            return failed == 0 ? kOk : kFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
