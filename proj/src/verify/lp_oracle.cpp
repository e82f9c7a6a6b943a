#include "laxhvac/verify/lp_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace laxhvac::verify {

LinearProgram random_tiny_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
    std::uniform_int_distribution<int> nv(1, max_vars), nr(1, max_rows), kind(0, 3);
    std::uniform_real_distribution<double> coef(-3.0, 3.0), width(0.1, 4.0), unit(0.0, 1.0);
    std::bernoulli_distribution sparse(0.3);

    LinearProgram lp;
    const int n = nv(rng);
    const int m = nr(rng);
    std::vector<double> point;
    for (int j = 0; j < n; ++j) {
        const double lo = coef(rng);
        const double hi = lo + width(rng);
        lp.add_variable("x" + std::to_string(j), lo, hi, coef(rng));
        point.push_back(lo + unit(rng) * (hi - lo));
    }
    for (int i = 0; i < m; ++i) {
        double act = 0.0;
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j) {
            if (sparse(rng)) {
                continue;
            }
            const double v = coef(rng);
            row.push_back({j, v});
            act += v * point[static_cast<std::size_t>(j)];
        }
        double lo = -kInf, hi = kInf;
        switch (kind(rng)) {
            case 0: lo = act - width(rng); break;
            case 1: hi = act + width(rng); break;
            case 2: lo = act - width(rng); hi = act + width(rng); break;
            default: lo = hi = act; break;
        }
        const int r = lp.add_row("r" + std::to_string(i), lo, hi);
        for (const auto& [j, v] : row) {
            lp.add_entry(r, j, v);
        }
    }
    lp.offset = coef(rng);
    return lp;
}

namespace {

struct Hyperplane {
    Eigen::RowVectorXd a;
    double b = 0.0;
    int group = 0;  // at most one plane per variable or row
};

class VertexSearch {
public:
    VertexSearch(const LinearProgram& lp, double tol) : lp_(lp), tol_(tol) {
        const int n = lp.num_vars();
        groups_.resize(static_cast<std::size_t>(n + lp.num_rows()));
        for (int j = 0; j < n; ++j) {
            Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
            e(j) = 1.0;
            add(j, e, lp.var_lo[static_cast<std::size_t>(j)], lp.var_hi[static_cast<std::size_t>(j)]);
        }
        std::vector<Eigen::RowVectorXd> rows(static_cast<std::size_t>(lp.num_rows()),
                                             Eigen::RowVectorXd::Zero(n));
        for (const auto& e : lp.entries) {
            rows[static_cast<std::size_t>(e.row)](e.col) += e.value;
        }
        for (int i = 0; i < lp.num_rows(); ++i) {
            add(n + i, rows[static_cast<std::size_t>(i)], lp.row_lo[static_cast<std::size_t>(i)],
                lp.row_hi[static_cast<std::size_t>(i)]);
        }
    }

    std::optional<double> run() {
        chosen_.clear();
        recurse(0);
        return best_;
    }

private:
    void add(int g, const Eigen::RowVectorXd& a, double lo, double hi) {
        auto& list = groups_[static_cast<std::size_t>(g)];
        if (std::isfinite(lo)) {
            list.push_back({a, lo, g});
        }
        if (std::isfinite(hi) && hi != lo) {
            list.push_back({a, hi, g});
        }
    }

    void recurse(std::size_t g) {
        const auto n = static_cast<std::size_t>(lp_.num_vars());
        if (chosen_.size() == n) {
            evaluate();
            return;
        }
        if (g == groups_.size() || groups_.size() - g < n - chosen_.size()) {
            return;
        }
        for (const auto& h : groups_[g]) {
            chosen_.push_back(&h);
            recurse(g + 1);
            chosen_.pop_back();
        }
        recurse(g + 1);
    }

    void evaluate() {
        const int n = lp_.num_vars();
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b(n);
        for (int k = 0; k < n; ++k) {
            a.row(k) = chosen_[static_cast<std::size_t>(k)]->a;
            b(k) = chosen_[static_cast<std::size_t>(k)]->b;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() < n) {
            return;
        }
        const Eigen::VectorXd x = lu.solve(b);
        std::vector<double> xv(x.data(), x.data() + n);
        if (lp_.max_violation(xv) > tol_) {
            return;
        }
        const double f = lp_.objective(xv);
        if (!best_ || f < *best_) {
            best_ = f;
        }
    }

    const LinearProgram& lp_;
    double tol_;
    std::vector<std::vector<Hyperplane>> groups_;
    std::vector<const Hyperplane*> chosen_;
    std::optional<double> best_;
};

}  // namespace

std::optional<double> vertex_enumeration_optimum(const LinearProgram& lp, double tol) {
    lp.validate();
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (!std::isfinite(lp.var_lo[static_cast<std::size_t>(j)]) ||
            !std::isfinite(lp.var_hi[static_cast<std::size_t>(j)])) {
            throw PreconditionError("vertex_enumeration_optimum: variable bounds must be finite");
        }
    }
    VertexSearch search(lp, tol);
    return search.run();
}

}  // namespace laxhvac::verify
