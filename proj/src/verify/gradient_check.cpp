#include "laxhvac/verify/gradient_check.hpp"

#include <random>

namespace laxhvac::verify {

Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + h;
        const double up = f(probe);
        probe(i) = x(i) - h;
        const double down = f(probe);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * h);
    }
    return g;
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

GradientReport random_gradient_check(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> width(2, 6), depth(1, 2), actions(1, 3), states(1, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const auto sd = static_cast<std::size_t>(states(rng));
    const auto ad = static_cast<Eigen::Index>(actions(rng));
    rl::DdpgConfig cfg;
    cfg.hidden = width(rng);
    cfg.hidden_layers = depth(rng);
    cfg.gamma = 0.9;
    Eigen::VectorXd lo(ad), hi(ad);
    for (Eigen::Index i = 0; i < ad; ++i) {
        lo(i) = -1.0 - std::abs(gauss(rng));
        hi(i) = 1.0 + std::abs(gauss(rng));
    }
    rl::Ddpg agent(sd, lo, hi, cfg, rng());
    for (rl::Mlp* net : {&agent.actor(), &agent.critic(), &agent.actor_target(),
                         &agent.critic_target()}) {
        Eigen::VectorXd theta(static_cast<Eigen::Index>(net->parameter_count()));
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            theta(i) = 0.7 * gauss(rng);
        }
        net->assign(theta);
    }
    auto random_state = [&] {
        Eigen::VectorXd s(static_cast<Eigen::Index>(sd));
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            s(i) = 3.0 + 2.0 * gauss(rng);
        }
        return s;
    };
    for (int k = 0; k < 20; ++k) {
        agent.normalizer().observe(random_state());
    }
    std::vector<rl::Transition> ts(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& t : ts) {
        t.s = random_state();
        t.s2 = random_state();
        t.a.resize(ad);
        for (Eigen::Index i = 0; i < ad; ++i) {
            t.a(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
        }
        t.r = gauss(rng);
    }
    const auto batch = rl::Batch::from(ts);

    GradientReport report;
    {
        const Eigen::VectorXd theta = agent.critic().flatten();
        const Eigen::VectorXd analytic = agent.critic_loss(batch).grad.flatten();
        rl::Ddpg probe = agent;
        const auto numeric = finite_difference(
            [&](const Eigen::VectorXd& x) {
                probe.critic().assign(x);
                return probe.critic_loss(batch).loss;
            },
            theta);
        report.critic_error = relative_error(analytic, numeric);
    }
    {
        const Eigen::VectorXd theta = agent.actor().flatten();
        const Eigen::VectorXd analytic = agent.actor_gradient(batch.s).flatten();
        rl::Ddpg probe = agent;
        const auto numeric = finite_difference(
            [&](const Eigen::VectorXd& x) {
                probe.actor().assign(x);
                return probe.actor_objective(batch.s);
            },
            theta);
        report.actor_error = relative_error(analytic, numeric);
    }
    return report;
}

}  // namespace laxhvac::verify
