#pragma once

#include "laxhvac/env.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace laxhvac::rl {

/// Fully connected network: tanh hidden layers, linear output. Inputs and
/// outputs are column-major batches (features x batch).
class Mlp {
public:
    Mlp() = default;
    /// `sizes` = {inputs, hidden..., outputs}. Hidden layers use Glorot
    /// uniform initialisation, the output layer U(-final_scale, final_scale).
    Mlp(const std::vector<int>& sizes, std::mt19937_64& rng, double final_scale = 3e-3);

    struct Cache {
        std::vector<Eigen::MatrixXd> activations;  ///< input, then each hidden layer
    };

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;

    /// Backpropagates `grad_out` (d loss / d output) through the cached pass.
    /// Adds parameter gradients into `grads` (same shape as *this) and
    /// returns d loss / d input.
    Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& grad_out,
                             Mlp& grads) const;

    /// Same shape, all parameters zero.
    Mlp zeros_like() const;

    std::size_t layers() const noexcept { return weights.size(); }
    int inputs() const { return static_cast<int>(weights.front().cols()); }
    int outputs() const { return static_cast<int>(weights.back().rows()); }
    std::size_t parameter_count() const;
    Eigen::VectorXd flatten() const;
    void assign(const Eigen::VectorXd& theta);

    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// theta' <- rho * theta + (1 - rho) * theta'
void soft_update(const Mlp& online, Mlp& target, double rho);

class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    /// Gradient descent step on `net` with gradient `grad`.
    void step(Mlp& net, const Mlp& grad);

private:
    double lr_, beta1_, beta2_, eps_;
    Eigen::VectorXd m_, v_;
    long t_ = 0;
};

/// Per-feature running mean and variance (Welford); normalised values are
/// clipped to +-clip.
class Normalizer {
public:
    explicit Normalizer(std::size_t dim = 0, double clip = 5.0);

    void observe(const Eigen::VectorXd& x);
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
    long count() const noexcept { return count_; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    Eigen::VectorXd stddev() const;

    void write(std::ostream& out) const;
    void read(std::istream& in);

private:
    Eigen::VectorXd mean_;
    Eigen::VectorXd m2_;
    long count_ = 0;
    double clip_ = 5.0;
};

struct Transition {
    Eigen::VectorXd s;
    Eigen::VectorXd a;
    double r = 0.0;
    Eigen::VectorXd s2;
};

/// Fixed-capacity FIFO of transitions with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    /// Oldest-first access.
    const Transition& at(std::size_t i) const;
    /// `n` indices drawn uniformly with replacement.
    std::vector<std::size_t> sample_indices(std::size_t n, std::mt19937_64& rng) const;
    std::vector<Transition> sample(std::size_t n, std::mt19937_64& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> data_;
};

struct DdpgConfig {
    int hidden = 64;
    int hidden_layers = 2;
    double actor_lr = 1e-3;
    double critic_lr = 1e-3;
    double rho = 0.005;  ///< soft update coefficient
    double gamma = 0.99;
};

/// Batch of transitions as matrices (features x batch).
struct Batch {
    Eigen::MatrixXd s;
    Eigen::MatrixXd a;
    Eigen::VectorXd r;
    Eigen::MatrixXd s2;

    static Batch from(const std::vector<Transition>& ts);
};

struct CriticLoss {
    double loss = 0.0;
    Mlp grad;
};

/// Deterministic actor-critic with target networks. The actor outputs
/// lo + (hi - lo) * (tanh(z) + 1) / 2 per action dimension; the critic sees
/// the normalised state and the action rescaled to [-1, 1].
class Ddpg {
public:
    Ddpg() = default;
    Ddpg(std::size_t state_dim, Eigen::VectorXd action_lo, Eigen::VectorXd action_hi,
         const DdpgConfig& cfg, std::uint64_t seed);

    std::size_t state_dim() const noexcept { return norm_.dim(); }
    std::size_t action_dim() const noexcept { return static_cast<std::size_t>(lo_.size()); }
    const Eigen::VectorXd& action_lo() const noexcept { return lo_; }
    const Eigen::VectorXd& action_hi() const noexcept { return hi_; }
    const DdpgConfig& config() const noexcept { return cfg_; }

    Eigen::VectorXd act(const Eigen::VectorXd& s) const;
    Eigen::MatrixXd act_batch(const Eigen::MatrixXd& s) const;
    Eigen::VectorXd q_batch(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a) const;

    /// Mean squared Bellman error against the target networks, with gradient
    /// with respect to the online critic parameters.
    CriticLoss critic_loss(const Batch& b) const;
    /// Batch mean of Q(s, mu(s)).
    double actor_objective(const Eigen::MatrixXd& s) const;
    /// Gradient of actor_objective with respect to the actor parameters.
    Mlp actor_gradient(const Eigen::MatrixXd& s) const;

    /// One critic step, one actor ascent step, then soft target updates.
    /// Returns the critic loss before the step.
    double update(const Batch& b);

    Normalizer& normalizer() noexcept { return norm_; }
    const Normalizer& normalizer() const noexcept { return norm_; }
    Mlp& actor() noexcept { return actor_; }
    Mlp& critic() noexcept { return critic_; }
    Mlp& actor_target() noexcept { return actor_target_; }
    Mlp& critic_target() noexcept { return critic_target_; }
    const Mlp& actor() const noexcept { return actor_; }
    const Mlp& critic() const noexcept { return critic_; }

    void save(std::ostream& out) const;
    static Ddpg load(std::istream& in);

private:
    Eigen::MatrixXd scale_action(const Eigen::MatrixXd& squashed) const;
    Eigen::MatrixXd unit_action(const Eigen::MatrixXd& a) const;
    Eigen::MatrixXd critic_input(const Eigen::MatrixXd& s_norm, const Eigen::MatrixXd& a_unit) const;

    DdpgConfig cfg_;
    Eigen::VectorXd lo_, hi_;
    Normalizer norm_;
    Mlp actor_, critic_, actor_target_, critic_target_;
    Adam actor_opt_, critic_opt_;
};

/// An episodic control problem with vector states and box actions.
class Task {
public:
    virtual ~Task() = default;

    virtual std::size_t state_dim() const = 0;
    virtual Eigen::VectorXd action_lo() const = 0;
    virtual Eigen::VectorXd action_hi() const = 0;
    virtual std::size_t episode_starts() const = 0;
    virtual Eigen::VectorXd reset(std::size_t offset) = 0;
    /// Applies `action`, writes the next state and returns the reward.
    virtual double step(const Eigen::VectorXd& action, Eigen::VectorXd& next) = 0;
    virtual bool done() const = 0;
    virtual const std::vector<TraceRow>& trace() const = 0;
    virtual double dt() const = 0;
};

/// The aggregator's view of an Environment: state (price, L), action P.
class AbstractTask final : public Task {
public:
    explicit AbstractTask(Environment& env) : env_(env) {}

    std::size_t state_dim() const override { return 2; }
    Eigen::VectorXd action_lo() const override;
    Eigen::VectorXd action_hi() const override;
    std::size_t episode_starts() const override { return env_.episode_starts(); }
    Eigen::VectorXd reset(std::size_t offset) override;
    double step(const Eigen::VectorXd& action, Eigen::VectorXd& next) override;
    bool done() const override { return env_.done(); }
    const std::vector<TraceRow>& trace() const override { return env_.trace(); }
    double dt() const override { return env_.fleet().dt(); }

    static Eigen::VectorXd encode(const AbstractState& s);

private:
    Environment& env_;
};

struct TrainConfig {
    int episodes = 200;
    DdpgConfig ddpg;
    std::size_t buffer = 100000;
    std::size_t batch = 64;
    int warmup_steps = 500;     ///< uniform random actions before the policy acts
    double noise_start = 0.3;   ///< Gaussian sigma as a fraction of half the action range
    double noise_end = 0.02;
    int updates_per_step = 1;
    bool random_offsets = true; ///< draw each episode's start in the exogenous series
    double reward_scale = 1.0;  ///< multiplies rewards stored for learning (not the curve)
    std::uint64_t seed = 1;
};

struct EpisodeStats {
    int episode = 0;
    double reward = 0.0;
    double atd = 0.0;
    double tec = 0.0;
};

struct TrainResult {
    Ddpg agent;
    std::vector<EpisodeStats> curve;
};

/// Trains a fresh agent. Fully determined by `cfg` (including its seed) and
/// the task.
TrainResult train(Task& task, const TrainConfig& cfg);

/// Runs one noise-free episode from `offset`.
EpisodeStats evaluate(Task& task, const Ddpg& agent, std::size_t offset);

/// Runs one episode with a constant action.
EpisodeStats evaluate_constant(Task& task, const Eigen::VectorXd& action, std::size_t offset);

void write_curve_csv(std::ostream& out, const std::vector<EpisodeStats>& curve);
std::vector<EpisodeStats> read_curve_csv(std::istream& in);

}  // namespace laxhvac::rl
