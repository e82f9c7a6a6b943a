#include "laxhvac/rl.hpp"

#include "laxhvac/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace laxhvac::rl {

// ---------------------------------------------------------------------------
// Mlp

Mlp::Mlp(const std::vector<int>& sizes, std::mt19937_64& rng, double final_scale) {
    if (sizes.size() < 2) {
        throw PreconditionError("Mlp: need at least input and output sizes");
    }
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int in = sizes[l];
        const int out = sizes[l + 1];
        if (in < 1 || out < 1) {
            throw PreconditionError("Mlp: layer sizes must be positive");
        }
        const bool last = l + 2 == sizes.size();
        const double limit = last ? final_scale : std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd w(out, in);
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) {
                w(i, j) = dist(rng);
            }
        }
        Eigen::VectorXd b(out);
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            b(i) = last ? dist(rng) : 0.0;
        }
        weights.push_back(std::move(w));
        biases.push_back(std::move(b));
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        Eigen::MatrixXd z = weights[l] * a;
        z.colwise() += biases[l];
        a = l + 1 < weights.size() ? Eigen::MatrixXd(z.array().tanh()) : z;
    }
    return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
    cache.activations.clear();
    cache.activations.push_back(x);
    Eigen::MatrixXd out;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        Eigen::MatrixXd z = weights[l] * cache.activations.back();
        z.colwise() += biases[l];
        if (l + 1 < weights.size()) {
            cache.activations.push_back(z.array().tanh().matrix());
        } else {
            out = std::move(z);
        }
    }
    return out;
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& grad_out,
                              Mlp& grads) const {
    Eigen::MatrixXd g = grad_out;
    for (std::size_t k = weights.size(); k-- > 0;) {
        const auto& a = cache.activations[k];
        grads.weights[k].noalias() += g * a.transpose();
        grads.biases[k] += g.rowwise().sum();
        Eigen::MatrixXd prev = weights[k].transpose() * g;
        if (k > 0) {
            prev.array() *= 1.0 - a.array().square();
        }
        g = std::move(prev);
    }
    return g;
}

Mlp Mlp::zeros_like() const {
    Mlp z;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        z.weights.push_back(Eigen::MatrixXd::Zero(weights[l].rows(), weights[l].cols()));
        z.biases.push_back(Eigen::VectorXd::Zero(biases[l].size()));
    }
    return z;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
    }
    return n;
}

Eigen::VectorXd Mlp::flatten() const {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        theta.segment(k, weights[l].size()) = weights[l].reshaped();
        k += weights[l].size();
        theta.segment(k, biases[l].size()) = biases[l];
        k += biases[l].size();
    }
    return theta;
}

void Mlp::assign(const Eigen::VectorXd& theta) {
    if (static_cast<std::size_t>(theta.size()) != parameter_count()) {
        throw PreconditionError("Mlp::assign: parameter vector has wrong size");
    }
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l].reshaped() = theta.segment(k, weights[l].size());
        k += weights[l].size();
        biases[l] = theta.segment(k, biases[l].size());
        k += biases[l].size();
    }
}

void soft_update(const Mlp& online, Mlp& target, double rho) {
    if (online.layers() != target.layers()) {
        throw PreconditionError("soft_update: networks differ in shape");
    }
    for (std::size_t l = 0; l < online.layers(); ++l) {
        target.weights[l] = rho * online.weights[l] + (1.0 - rho) * target.weights[l];
        target.biases[l] = rho * online.biases[l] + (1.0 - rho) * target.biases[l];
    }
}

void Adam::step(Mlp& net, const Mlp& grad) {
    const Eigen::VectorXd g = grad.flatten();
    if (m_.size() != g.size()) {
        m_ = Eigen::VectorXd::Zero(g.size());
        v_ = Eigen::VectorXd::Zero(g.size());
        t_ = 0;
    }
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * g;
    v_ = beta2_ * v_ + (1.0 - beta2_) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    const Eigen::VectorXd step =
        lr_ * (m_ / c1).array() / ((v_ / c2).array().sqrt() + eps_);
    net.assign(net.flatten() - step);
}

// ---------------------------------------------------------------------------
// Normalizer

Normalizer::Normalizer(std::size_t dim, double clip)
    : mean_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      m2_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      clip_(clip) {}

void Normalizer::observe(const Eigen::VectorXd& x) {
    if (x.size() != mean_.size()) {
        throw PreconditionError("Normalizer::observe: dimension mismatch");
    }
    ++count_;
    const Eigen::VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(x - mean_);
}

Eigen::VectorXd Normalizer::stddev() const {
    if (count_ < 2) {
        return Eigen::VectorXd::Ones(mean_.size());
    }
    Eigen::VectorXd sd = (m2_ / static_cast<double>(count_)).cwiseSqrt();
    for (Eigen::Index i = 0; i < sd.size(); ++i) {
        sd(i) = std::max(sd(i), 1e-6);
    }
    return sd;
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& x) const {
    return apply(Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
    if (x.rows() != mean_.size()) {
        throw PreconditionError("Normalizer::apply: dimension mismatch");
    }
    const Eigen::VectorXd inv = stddev().cwiseInverse();
    Eigen::MatrixXd out = (x.colwise() - mean_).array().colwise() * inv.array();
    return out.cwiseMax(-clip_).cwiseMin(clip_);
}

void Normalizer::write(std::ostream& out) const {
    out << "normalizer " << mean_.size() << ' ' << count_ << ' ' << clip_ << '\n';
    for (Eigen::Index i = 0; i < mean_.size(); ++i) {
        out << mean_(i) << ' ' << m2_(i) << '\n';
    }
}

void Normalizer::read(std::istream& in) {
    std::string tag;
    Eigen::Index dim = 0;
    in >> tag >> dim >> count_ >> clip_;
    if (!in || tag != "normalizer" || dim < 0) {
        throw DataError("checkpoint: bad normalizer block");
    }
    mean_.resize(dim);
    m2_.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        in >> mean_(i) >> m2_(i);
    }
    if (!in) {
        throw DataError("checkpoint: truncated normalizer block");
    }
}

// ---------------------------------------------------------------------------
// ReplayBuffer

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw PreconditionError("ReplayBuffer: capacity must be positive");
    }
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= data_.size()) {
        throw PreconditionError("ReplayBuffer::at: index out of range");
    }
    return data_[(head_ + i) % data_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, std::mt19937_64& rng) const {
    if (data_.empty()) {
        throw PreconditionError("ReplayBuffer::sample: buffer is empty");
    }
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<std::size_t> out(n);
    for (auto& i : out) {
        i = pick(rng);
    }
    return out;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
    std::vector<Transition> out;
    out.reserve(n);
    for (const auto i : sample_indices(n, rng)) {
        out.push_back(data_[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ddpg

Batch Batch::from(const std::vector<Transition>& ts) {
    if (ts.empty()) {
        throw PreconditionError("Batch: no transitions");
    }
    const auto n = static_cast<Eigen::Index>(ts.size());
    Batch b;
    b.s.resize(ts.front().s.size(), n);
    b.a.resize(ts.front().a.size(), n);
    b.r.resize(n);
    b.s2.resize(ts.front().s2.size(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& t = ts[static_cast<std::size_t>(k)];
        b.s.col(k) = t.s;
        b.a.col(k) = t.a;
        b.r(k) = t.r;
        b.s2.col(k) = t.s2;
    }
    return b;
}

Ddpg::Ddpg(std::size_t state_dim, Eigen::VectorXd action_lo, Eigen::VectorXd action_hi,
           const DdpgConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      lo_(std::move(action_lo)),
      hi_(std::move(action_hi)),
      norm_(state_dim),
      actor_opt_(cfg.actor_lr),
      critic_opt_(cfg.critic_lr) {
    if (lo_.size() == 0 || lo_.size() != hi_.size() || (hi_.array() <= lo_.array()).any()) {
        throw PreconditionError("Ddpg: action bounds must be non-empty with lo < hi");
    }
    if (cfg.hidden < 1 || cfg.hidden_layers < 1) {
        throw ConfigError("ddpg: hidden width and layer count must be >= 1");
    }
    const auto s = static_cast<int>(state_dim);
    const auto a = static_cast<int>(lo_.size());
    std::vector<int> actor_sizes{s};
    std::vector<int> critic_sizes{s + a};
    for (int l = 0; l < cfg.hidden_layers; ++l) {
        actor_sizes.push_back(cfg.hidden);
        critic_sizes.push_back(cfg.hidden);
    }
    actor_sizes.push_back(a);
    critic_sizes.push_back(1);
    std::mt19937_64 rng(seed);
    actor_ = Mlp(actor_sizes, rng);
    critic_ = Mlp(critic_sizes, rng);
    actor_target_ = actor_;
    critic_target_ = critic_;
}

Eigen::MatrixXd Ddpg::scale_action(const Eigen::MatrixXd& squashed) const {
    const Eigen::VectorXd half = 0.5 * (hi_ - lo_);
    Eigen::MatrixXd a = (squashed.array() + 1.0).colwise() * half.array();
    a.colwise() += lo_;
    return a;
}

Eigen::MatrixXd Ddpg::unit_action(const Eigen::MatrixXd& a) const {
    const Eigen::VectorXd inv_half = (0.5 * (hi_ - lo_)).cwiseInverse();
    Eigen::MatrixXd u = (a.colwise() - lo_).array().colwise() * inv_half.array();
    return u.array() - 1.0;
}

Eigen::MatrixXd Ddpg::critic_input(const Eigen::MatrixXd& s_norm,
                                   const Eigen::MatrixXd& a_unit) const {
    Eigen::MatrixXd x(s_norm.rows() + a_unit.rows(), s_norm.cols());
    x << s_norm, a_unit;
    return x;
}

Eigen::VectorXd Ddpg::act(const Eigen::VectorXd& s) const {
    return act_batch(Eigen::MatrixXd(s)).col(0);
}

Eigen::MatrixXd Ddpg::act_batch(const Eigen::MatrixXd& s) const {
    const Eigen::MatrixXd z = actor_.forward(norm_.apply(s));
    Eigen::MatrixXd a = scale_action(z.array().tanh().matrix());
    // Rounding can leave the scaled value a hair outside the box.
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        a.col(j) = a.col(j).cwiseMax(lo_).cwiseMin(hi_);
    }
    return a;
}

Eigen::VectorXd Ddpg::q_batch(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a) const {
    return critic_.forward(critic_input(norm_.apply(s), unit_action(a))).row(0).transpose();
}

CriticLoss Ddpg::critic_loss(const Batch& b) const {
    const auto n = static_cast<double>(b.r.size());
    const Eigen::MatrixXd s2n = norm_.apply(b.s2);
    const Eigen::MatrixXd a2 = actor_target_.forward(s2n).array().tanh().matrix();
    const Eigen::VectorXd q2 = critic_target_.forward(critic_input(s2n, a2)).row(0).transpose();
    const Eigen::VectorXd y = b.r + cfg_.gamma * q2;

    Mlp::Cache cache;
    const Eigen::VectorXd q =
        critic_.forward(critic_input(norm_.apply(b.s), unit_action(b.a)), cache).row(0).transpose();
    const Eigen::VectorXd diff = q - y;
    CriticLoss out;
    out.loss = diff.squaredNorm() / n;
    out.grad = critic_.zeros_like();
    const Eigen::MatrixXd g = (2.0 / n) * diff.transpose();
    critic_.backward(cache, g, out.grad);
    return out;
}

double Ddpg::actor_objective(const Eigen::MatrixXd& s) const {
    const Eigen::MatrixXd sn = norm_.apply(s);
    const Eigen::MatrixXd a = actor_.forward(sn).array().tanh().matrix();
    return critic_.forward(critic_input(sn, a)).mean();
}

Mlp Ddpg::actor_gradient(const Eigen::MatrixXd& s) const {
    const auto n = static_cast<double>(s.cols());
    const Eigen::MatrixXd sn = norm_.apply(s);
    Mlp::Cache actor_cache;
    const Eigen::MatrixXd z = actor_.forward(sn, actor_cache);
    const Eigen::MatrixXd a = z.array().tanh().matrix();

    Mlp::Cache critic_cache;
    critic_.forward(critic_input(sn, a), critic_cache);
    Mlp unused = critic_.zeros_like();
    const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, s.cols(), 1.0 / n);
    const Eigen::MatrixXd dx = critic_.backward(critic_cache, dq, unused);
    const Eigen::MatrixXd da = dx.bottomRows(a.rows());
    const Eigen::MatrixXd dz = da.array() * (1.0 - a.array().square());

    Mlp grad = actor_.zeros_like();
    actor_.backward(actor_cache, dz, grad);
    return grad;
}

double Ddpg::update(const Batch& b) {
    auto c = critic_loss(b);
    critic_opt_.step(critic_, c.grad);

    Mlp g = actor_gradient(b.s);
    for (std::size_t l = 0; l < g.layers(); ++l) {
        g.weights[l] = -g.weights[l];
        g.biases[l] = -g.biases[l];
    }
    actor_opt_.step(actor_, g);

    soft_update(actor_, actor_target_, cfg_.rho);
    soft_update(critic_, critic_target_, cfg_.rho);
    return c.loss;
}

namespace {

constexpr const char* kCheckpointMagic = "laxhvac-ddpg";
constexpr int kCheckpointVersion = 1;

void write_net(std::ostream& out, const char* name, const Mlp& net) {
    out << name << ' ' << net.layers() << '\n';
    for (std::size_t l = 0; l < net.layers(); ++l) {
        const auto& w = net.weights[l];
        out << w.rows() << ' ' << w.cols() << '\n';
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                out << w(i, j) << (j + 1 < w.cols() ? ' ' : '\n');
            }
        }
        for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) {
            out << net.biases[l](i) << (i + 1 < net.biases[l].size() ? ' ' : '\n');
        }
    }
}

Mlp read_net(std::istream& in, const char* name) {
    std::string tag;
    std::size_t layers = 0;
    in >> tag >> layers;
    if (!in || tag != name) {
        throw DataError(std::string("checkpoint: expected network '") + name + "'");
    }
    Mlp net;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::Index rows = 0, cols = 0;
        in >> rows >> cols;
        if (!in || rows < 1 || cols < 1) {
            throw DataError(std::string("checkpoint: bad layer shape in '") + name + "'");
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                in >> w(i, j);
            }
        }
        Eigen::VectorXd b(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            in >> b(i);
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    if (!in) {
        throw DataError(std::string("checkpoint: truncated network '") + name + "'");
    }
    return net;
}

}  // namespace

void Ddpg::save(std::ostream& out) const {
    const auto old = out.precision(17);
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    out << "config " << cfg_.hidden << ' ' << cfg_.hidden_layers << ' ' << cfg_.actor_lr << ' '
        << cfg_.critic_lr << ' ' << cfg_.rho << ' ' << cfg_.gamma << '\n';
    out << "actions " << lo_.size() << '\n';
    for (Eigen::Index i = 0; i < lo_.size(); ++i) {
        out << lo_(i) << ' ' << hi_(i) << '\n';
    }
    norm_.write(out);
    write_net(out, "actor", actor_);
    write_net(out, "critic", critic_);
    write_net(out, "actor_target", actor_target_);
    write_net(out, "critic_target", critic_target_);
    out.precision(old);
}

Ddpg Ddpg::load(std::istream& in) {
    std::string magic, tag;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != kCheckpointMagic) {
        throw DataError("checkpoint: not a policy checkpoint");
    }
    if (version != kCheckpointVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    Ddpg d;
    in >> tag >> d.cfg_.hidden >> d.cfg_.hidden_layers >> d.cfg_.actor_lr >> d.cfg_.critic_lr >>
        d.cfg_.rho >> d.cfg_.gamma;
    if (!in || tag != "config") {
        throw DataError("checkpoint: bad config block");
    }
    Eigen::Index dim = 0;
    in >> tag >> dim;
    if (!in || tag != "actions" || dim < 1) {
        throw DataError("checkpoint: bad action block");
    }
    d.lo_.resize(dim);
    d.hi_.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        in >> d.lo_(i) >> d.hi_(i);
    }
    d.norm_.read(in);
    d.actor_ = read_net(in, "actor");
    d.critic_ = read_net(in, "critic");
    d.actor_target_ = read_net(in, "actor_target");
    d.critic_target_ = read_net(in, "critic_target");
    d.actor_opt_ = Adam(d.cfg_.actor_lr);
    d.critic_opt_ = Adam(d.cfg_.critic_lr);
    return d;
}

// ---------------------------------------------------------------------------
// Tasks and training

Eigen::VectorXd AbstractTask::action_lo() const {
    return Eigen::VectorXd::Constant(1, env_.bounds().lo);
}

Eigen::VectorXd AbstractTask::action_hi() const {
    return Eigen::VectorXd::Constant(1, env_.bounds().hi);
}

Eigen::VectorXd AbstractTask::encode(const AbstractState& s) {
    Eigen::VectorXd v(2);
    v << s.price, s.laxity_sum;
    return v;
}

Eigen::VectorXd AbstractTask::reset(std::size_t offset) {
    env_.reset(offset);
    return encode(env_.observe());
}

double AbstractTask::step(const Eigen::VectorXd& action, Eigen::VectorXd& next) {
    const auto out = env_.step(action(0));
    next = encode(abstract(out.next));
    return out.reward;
}

TrainResult train(Task& task, const TrainConfig& cfg) {
    if (cfg.episodes < 0) {
        throw ConfigError("train.episodes: must be >= 0");
    }
    if (cfg.batch == 0) {
        throw ConfigError("train.batch: must be >= 1");
    }
    std::mt19937_64 rng(cfg.seed);
    const Eigen::VectorXd lo = task.action_lo();
    const Eigen::VectorXd hi = task.action_hi();
    TrainResult result{Ddpg(task.state_dim(), lo, hi, cfg.ddpg, rng()), {}};
    Ddpg& agent = result.agent;
    ReplayBuffer buffer(cfg.buffer);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::VectorXd half = 0.5 * (hi - lo);
    long steps = 0;

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        const double frac = cfg.episodes > 1 ? static_cast<double>(ep) / (cfg.episodes - 1) : 1.0;
        const double sigma = cfg.noise_start + (cfg.noise_end - cfg.noise_start) * frac;
        std::size_t offset = 0;
        if (cfg.random_offsets && task.episode_starts() > 1) {
            offset = std::uniform_int_distribution<std::size_t>(0, task.episode_starts() - 1)(rng);
        }
        Eigen::VectorXd s = task.reset(offset);
        agent.normalizer().observe(s);
        double total = 0.0;
        Eigen::VectorXd s2;
        while (!task.done()) {
            Eigen::VectorXd a(lo.size());
            if (steps < cfg.warmup_steps) {
                for (Eigen::Index i = 0; i < a.size(); ++i) {
                    a(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
                }
            } else {
                a = agent.act(s);
                for (Eigen::Index i = 0; i < a.size(); ++i) {
                    a(i) = std::clamp(a(i) + sigma * half(i) * gauss(rng), lo(i), hi(i));
                }
            }
            const double r = task.step(a, s2);
            agent.normalizer().observe(s2);
            buffer.push({s, a, cfg.reward_scale * r, s2});
            total += r;
            s = s2;
            ++steps;
            if (buffer.size() >= cfg.batch) {
                for (int k = 0; k < cfg.updates_per_step; ++k) {
                    agent.update(Batch::from(buffer.sample(cfg.batch, rng)));
                }
            }
        }
        const auto m = metrics(task.trace(), task.dt());
        result.curve.push_back({ep, total, m.atd, m.tec});
    }
    return result;
}

namespace {

template <typename Policy>
EpisodeStats run_episode(Task& task, std::size_t offset, Policy&& policy) {
    Eigen::VectorXd s = task.reset(offset);
    Eigen::VectorXd s2;
    EpisodeStats out;
    while (!task.done()) {
        out.reward += task.step(policy(s), s2);
        s = s2;
    }
    const auto m = metrics(task.trace(), task.dt());
    out.atd = m.atd;
    out.tec = m.tec;
    return out;
}

}  // namespace

EpisodeStats evaluate(Task& task, const Ddpg& agent, std::size_t offset) {
    return run_episode(task, offset, [&](const Eigen::VectorXd& s) { return agent.act(s); });
}

EpisodeStats evaluate_constant(Task& task, const Eigen::VectorXd& action, std::size_t offset) {
    return run_episode(task, offset, [&](const Eigen::VectorXd&) { return action; });
}

void write_curve_csv(std::ostream& out, const std::vector<EpisodeStats>& curve) {
    const auto old = out.precision(17);
    out << "episode,reward,atd,tec\n";
    for (const auto& e : curve) {
        out << e.episode << ',' << e.reward << ',' << e.atd << ',' << e.tec << '\n';
    }
    out.precision(old);
}

std::vector<EpisodeStats> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "episode,reward,atd,tec") {
        throw DataError("learning curve: unexpected header");
    }
    std::vector<EpisodeStats> out;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        EpisodeStats e;
        ss >> e.episode >> e.reward >> e.atd >> e.tec;
        if (!ss) {
            throw DataError("learning curve: row " + std::to_string(row) + " is malformed");
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace laxhvac::rl
