#include "laxhvac/pipeline.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

namespace laxhvac {

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::Proposed: return "proposed";
        case Method::Centralized: return "centralized";
        case Method::Mpc: return "mpc";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (const auto m : {Method::Proposed, Method::Centralized, Method::Mpc}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw ConfigError("method: expected proposed, centralized or mpc, got '" + name + "'");
}

ExogenousSeries training_series(const Scenario& s, const ExogenousSeries& exo) {
    const auto first = *std::min_element(s.eval_offsets.begin(), s.eval_offsets.end());
    if (first < static_cast<std::size_t>(s.episode_length)) {
        return exo;
    }
    ExogenousSeries out = exo;
    const auto keep = std::min(first, exo.size());
    out.price.resize(keep);
    out.x_out.resize(keep);
    if (!out.timestamps.empty()) {
        out.timestamps.resize(keep);
    }
    return out;
}

rl::TrainResult train_agent(const Scenario& s, const ExogenousSeries& exo, Method m) {
    Environment env(s.env_config(), training_series(s, exo));
    if (m == Method::Proposed) {
        rl::AbstractTask task(env);
        return rl::train(task, s.train);
    }
    if (m == Method::Centralized) {
        CentralizedTask task(env);
        return rl::train(task, s.centralized);
    }
    throw PreconditionError("train_agent: MPC is not trained");
}

namespace {

void check_offset(const Environment& env, std::size_t offset) {
    if (offset >= env.episode_starts()) {
        throw ConfigError("eval offset " + std::to_string(offset) + " leaves less than one episode of data");
    }
}

}  // namespace

Evaluation evaluate_agent(const Scenario& s, const ExogenousSeries& exo, Method m,
                          const rl::Ddpg& agent, std::size_t offset) {
    Environment env(s.env_config(), exo);
    check_offset(env, offset);
    Evaluation out;
    out.method = m;
    out.offset = offset;
    rl::EpisodeStats stats;
    if (m == Method::Proposed) {
        rl::AbstractTask task(env);
        stats = rl::evaluate(task, agent, offset);
    } else if (m == Method::Centralized) {
        CentralizedTask task(env);
        stats = rl::evaluate(task, agent, offset);
    } else {
        throw PreconditionError("evaluate_agent: MPC has no agent");
    }
    out.reward = stats.reward;
    out.trace = env.trace();
    out.metrics = metrics(out.trace, env.fleet().dt());
    return out;
}

Evaluation evaluate_constant_power(const Scenario& s, const ExogenousSeries& exo, double power,
                                   std::size_t offset) {
    Environment env(s.env_config(), exo);
    check_offset(env, offset);
    rl::AbstractTask task(env);
    Eigen::VectorXd a(1);
    a << power;
    Evaluation out;
    out.offset = offset;
    out.reward = rl::evaluate_constant(task, a, offset).reward;
    out.trace = env.trace();
    out.metrics = metrics(out.trace, env.fleet().dt());
    return out;
}

Evaluation evaluate_mpc(const Scenario& s, const ExogenousSeries& exo, std::size_t offset) {
    Environment env(s.env_config(), exo);
    check_offset(env, offset);
    auto r = run_mpc(env, offset, s.mpc);
    Evaluation out;
    out.method = Method::Mpc;
    out.offset = offset;
    out.metrics = r.metrics;
    out.trace = std::move(r.trace);
    return out;
}

MethodRun run_method(const Scenario& s, const ExogenousSeries& exo, Method m) {
    MethodRun run;
    run.method = m;
    if (m != Method::Mpc) {
        const auto start = std::chrono::steady_clock::now();
        auto trained = train_agent(s, exo, m);
        run.train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        run.curve = std::move(trained.curve);
        run.agent.emplace(std::move(trained.agent));
    }
    for (const auto offset : s.eval_offsets) {
        run.evaluations.push_back(m == Method::Mpc ? evaluate_mpc(s, exo, offset)
                                                   : evaluate_agent(s, exo, m, *run.agent, offset));
        run.mean.atd += run.evaluations.back().metrics.atd;
        run.mean.tec += run.evaluations.back().metrics.tec;
    }
    const auto n = static_cast<double>(run.evaluations.size());
    run.mean.atd /= n;
    run.mean.tec /= n;
    return run;
}

ComparisonRow comparison_row(const MethodRun& run) {
    return {run.method, run.mean.atd, run.mean.tec};
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    const auto old = out.precision(17);
    out << "method,atd,tec\n";
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.atd << ',' << r.tec << '\n';
    }
    out.precision(old);
}

int convergence_episode(const std::vector<rl::EpisodeStats>& curve, int window, double tolerance) {
    const int n = static_cast<int>(curve.size());
    if (n == 0) {
        return 0;
    }
    const int w = std::max(1, std::min(window, n));
    double plateau = 0.0;
    for (int k = n - w; k < n; ++k) {
        plateau += curve[static_cast<std::size_t>(k)].reward;
    }
    plateau /= w;
    const double band = tolerance * std::abs(plateau);
    int first = n;
    for (int k = n - 1; k >= 0; --k) {
        const int lo = std::max(0, k - w + 1);
        double avg = 0.0;
        for (int j = lo; j <= k; ++j) {
            avg += curve[static_cast<std::size_t>(j)].reward;
        }
        avg /= (k - lo + 1);
        if (std::abs(avg - plateau) > band) {
            break;
        }
        first = k;
    }
    return first;
}

}  // namespace laxhvac
