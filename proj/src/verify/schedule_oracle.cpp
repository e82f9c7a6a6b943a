#include "laxhvac/verify/schedule_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

namespace laxhvac::verify {

namespace {

std::uint64_t encode(int t, const std::vector<int>& rem) {
    std::uint64_t key = static_cast<std::uint64_t>(t);
    for (const int r : rem) {
        key = key * 64 + static_cast<std::uint64_t>(r);
    }
    return key;
}

std::vector<int> work_quanta(const GridInstance& inst) {
    std::vector<int> out;
    for (const auto& j : inst.jobs) {
        out.push_back(static_cast<int>(std::lround(j.work * inst.quanta_per_unit)));
    }
    return out;
}

class SplitSearch {
public:
    SplitSearch(const GridInstance& inst, const std::vector<int>& totals)
        : inst_(inst), totals_(totals) {}

    bool run() {
        auto rem = work_quanta(inst_);
        return feasible(0, rem);
    }

private:
    bool feasible(int t, std::vector<int>& rem) {
        const auto n = rem.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (rem[i] > 0 && inst_.jobs[i].t_end <= t) {
                return false;
            }
        }
        if (t == inst_.horizon) {
            return std::all_of(rem.begin(), rem.end(), [](int r) { return r == 0; });
        }
        const auto key = encode(t, rem);
        if (dead_.count(key) != 0) {
            return false;
        }
        std::vector<int> alloc(n, 0);
        const bool ok = branch(t, 0, totals_[static_cast<std::size_t>(t)], rem, alloc);
        if (!ok) {
            dead_.insert(key);
        }
        return ok;
    }

    // Enumerates every allocation of up to `budget` quanta at step t.
    bool branch(int t, std::size_t i, int budget, std::vector<int>& rem, std::vector<int>& alloc) {
        if (i == rem.size()) {
            auto next = rem;
            for (std::size_t k = 0; k < rem.size(); ++k) {
                next[k] -= alloc[k];
            }
            return feasible(t + 1, next);
        }
        const auto& job = inst_.jobs[i];
        int limit = 0;
        if (job.t_start <= t && t < job.t_end) {
            limit = std::min({inst_.quanta_per_unit, rem[i], budget});
        }
        for (int a = limit; a >= 0; --a) {
            alloc[i] = a;
            if (branch(t, i + 1, budget - a, rem, alloc)) {
                return true;
            }
        }
        alloc[i] = 0;
        return false;
    }

    const GridInstance& inst_;
    const std::vector<int>& totals_;
    std::unordered_set<std::uint64_t> dead_;
};

}  // namespace

GridInstance random_grid_instance(std::mt19937_64& rng, int max_units, int max_steps,
                                  std::uint64_t leaf_budget, int quanta_per_unit) {
    GridInstance inst;
    const double u_max = 1.0;
    const int kQuantaPerUnit = quanta_per_unit;
    inst.quanta_per_unit = quanta_per_unit;
    inst.quantum = u_max / kQuantaPerUnit;
    const int n = std::uniform_int_distribution<int>(1, max_units)(rng);
    inst.max_quanta = std::uniform_int_distribution<int>(1, kQuantaPerUnit * n)(rng);
    int horizon = max_steps;
    while (horizon > 1 &&
           std::pow(static_cast<double>(inst.max_quanta + 1), horizon) > static_cast<double>(leaf_budget)) {
        --horizon;
    }
    inst.horizon = std::uniform_int_distribution<int>(std::max(1, horizon - 2), horizon)(rng);
    for (int i = 0; i < n; ++i) {
        AbstractRequestFleet::Job job;
        job.u_max = u_max;
        job.t_start = 0;
        job.t_end = std::uniform_int_distribution<int>(1, inst.horizon)(rng);
        const int window = job.t_end - job.t_start;
        const int quanta = std::uniform_int_distribution<int>(0, kQuantaPerUnit * window)(rng);
        job.work = static_cast<double>(quanta) / kQuantaPerUnit;
        inst.jobs.push_back(job);
    }
    return inst;
}

bool totals_admit_split(const GridInstance& inst, const std::vector<int>& totals) {
    SplitSearch search(inst, totals);
    return search.run();
}

std::vector<std::vector<int>> feasible_total_schedules(const GridInstance& inst) {
    const auto work = work_quanta(inst);
    // demand[t]: quanta that must be delivered strictly before step t
    std::vector<int> demand(static_cast<std::size_t>(inst.horizon) + 1, 0);
    for (std::size_t i = 0; i < work.size(); ++i) {
        for (int t = inst.jobs[i].t_end; t <= inst.horizon; ++t) {
            demand[static_cast<std::size_t>(t)] += work[i];
        }
    }

    std::vector<std::vector<int>> out;
    std::vector<int> totals(static_cast<std::size_t>(inst.horizon), 0);
    std::function<void(int, int)> walk = [&](int t, int supplied) {
        if (supplied < demand[static_cast<std::size_t>(t)]) {
            return;
        }
        if (t == inst.horizon) {
            if (totals_admit_split(inst, totals)) {
                out.push_back(totals);
            }
            return;
        }
        for (int q = 0; q <= inst.max_quanta; ++q) {
            totals[static_cast<std::size_t>(t)] = q;
            walk(t + 1, supplied + q);
        }
    };
    walk(0, 0);
    return out;
}

Prop3Result llf_recovery_search(int count, std::uint64_t seed, int max_units, int max_steps,
                                int quanta_per_unit) {
    std::mt19937_64 rng(seed);
    Prop3Result result;
    for (int k = 0; k < count; ++k) {
        const auto inst = random_grid_instance(rng, max_units, max_steps, 200000, quanta_per_unit);
        ++result.instances;
        const auto feasible = feasible_total_schedules(inst);
        if (!feasible.empty()) {
            ++result.instances_with_feasible;
        }
        AbstractRequestFleet fleet(inst.jobs, 0);
        const PowerBounds bounds{0.0, inst.max_quanta * inst.quantum};
        for (const auto& q : feasible) {
            std::vector<double> totals;
            for (const int v : q) {
                totals.push_back(v * inst.quantum);
            }
            const auto schedule = llf_recover(totals, fleet);
            const auto report = check_feasible(schedule, bounds, fleet);
            ++result.schedules_checked;
            if (!report.feasible) {
                ++result.counterexamples;
            }
        }
    }
    return result;
}

}  // namespace laxhvac::verify
