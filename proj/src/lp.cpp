#include "laxhvac/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace laxhvac {

int LinearProgram::add_variable(std::string name, double lo, double hi, double c) {
    cost.push_back(c);
    var_lo.push_back(lo);
    var_hi.push_back(hi);
    var_names.push_back(std::move(name));
    return num_vars() - 1;
}

int LinearProgram::add_row(std::string name, double lo, double hi) {
    row_lo.push_back(lo);
    row_hi.push_back(hi);
    row_names.push_back(std::move(name));
    return num_rows() - 1;
}

void LinearProgram::add_entry(int row, int col, double value) {
    entries.push_back({row, col, value});
}

void LinearProgram::validate() const {
    const auto n = cost.size();
    if (var_lo.size() != n || var_hi.size() != n) {
        throw PreconditionError("LP: variable bound vectors do not match the cost vector");
    }
    if (row_hi.size() != row_lo.size()) {
        throw PreconditionError("LP: row bound vectors differ in length");
    }
    if (!var_names.empty() && var_names.size() != n) {
        throw PreconditionError("LP: variable names do not match the variable count");
    }
    if (!row_names.empty() && row_names.size() != row_lo.size()) {
        throw PreconditionError("LP: row names do not match the row count");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(cost[j]) || std::isnan(var_lo[j]) || std::isnan(var_hi[j]) ||
            var_lo[j] > var_hi[j] || var_lo[j] == kInf || var_hi[j] == -kInf) {
            throw PreconditionError("LP: inconsistent bounds or cost for variable " +
                                    std::to_string(j));
        }
    }
    for (std::size_t i = 0; i < row_lo.size(); ++i) {
        if (std::isnan(row_lo[i]) || std::isnan(row_hi[i]) || row_lo[i] > row_hi[i] ||
            row_lo[i] == kInf || row_hi[i] == -kInf) {
            throw PreconditionError("LP: inconsistent bounds for row " + std::to_string(i));
        }
    }
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= num_rows() || e.col < 0 || e.col >= num_vars() ||
            !std::isfinite(e.value)) {
            throw PreconditionError("LP: bad matrix entry at (" + std::to_string(e.row) + ", " +
                                    std::to_string(e.col) + ")");
        }
    }
}

std::vector<double> LinearProgram::activity(const std::vector<double>& x) const {
    std::vector<double> r(row_lo.size(), 0.0);
    for (const auto& e : entries) {
        r[static_cast<std::size_t>(e.row)] += e.value * x[static_cast<std::size_t>(e.col)];
    }
    return r;
}

double LinearProgram::objective(const std::vector<double>& x) const {
    double f = offset;
    for (std::size_t j = 0; j < cost.size(); ++j) {
        f += cost[j] * x[j];
    }
    return f;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < cost.size(); ++j) {
        worst = std::max({worst, var_lo[j] - x[j], x[j] - var_hi[j]});
    }
    const auto r = activity(x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        worst = std::max({worst, row_lo[i] - r[i], r[i] - row_hi[i]});
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

using SparseColumn = std::vector<std::pair<int, double>>;

class Simplex {
public:
    Simplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
        n_ = lp.num_vars();
        m_ = lp.num_rows();
        std::map<std::pair<int, int>, double> merged;
        for (const auto& e : lp.entries) {
            merged[{e.col, e.row}] += e.value;
        }
        cols_.resize(static_cast<std::size_t>(n_));
        for (const auto& [key, v] : merged) {
            if (v != 0.0) {
                cols_[static_cast<std::size_t>(key.first)].push_back({key.second, v});
            }
        }
        for (int j = 0; j < n_; ++j) {
            lo_.push_back(lp.var_lo[static_cast<std::size_t>(j)]);
            hi_.push_back(lp.var_hi[static_cast<std::size_t>(j)]);
            const double l = lo_.back(), h = hi_.back();
            x_.push_back(std::isfinite(l) ? l : (std::isfinite(h) ? h : 0.0));
        }
        for (int i = 0; i < m_; ++i) {
            cols_.push_back({{i, -1.0}});
            lo_.push_back(lp.row_lo[static_cast<std::size_t>(i)]);
            hi_.push_back(lp.row_hi[static_cast<std::size_t>(i)]);
            x_.push_back(0.0);
        }
        build_initial_basis();
    }

    LpSolution run() {
        LpSolution sol;
        if (artificials_ > 0) {
            cost_.assign(cols_.size(), 0.0);
            for (std::size_t j = static_cast<std::size_t>(n_ + m_); j < cols_.size(); ++j) {
                cost_[j] = 1.0;
            }
            iterate(true);
            double infeasibility = 0.0;
            for (std::size_t j = static_cast<std::size_t>(n_ + m_); j < cols_.size(); ++j) {
                infeasibility += std::abs(x_[j]);
                hi_[j] = 0.0;
                if (pos_[j] < 0) {
                    x_[j] = 0.0;
                }
            }
            if (infeasibility > 1e-7) {
                throw LpInfeasibleError("solve_lp: no feasible point (phase-1 infeasibility " +
                                        std::to_string(infeasibility) + ")");
            }
        }
        cost_.assign(cols_.size(), 0.0);
        for (int j = 0; j < n_; ++j) {
            cost_[static_cast<std::size_t>(j)] = lp_.cost[static_cast<std::size_t>(j)];
        }
        iterate(false);
        refactor();

        sol.x.assign(x_.begin(), x_.begin() + n_);
        // Snap nonbasic structurals exactly onto their bounds.
        for (int j = 0; j < n_; ++j) {
            const auto k = static_cast<std::size_t>(j);
            sol.x[k] = std::clamp(sol.x[k], lo_[k], hi_[k]);
        }
        sol.objective = lp_.objective(sol.x);
        sol.iterations = iterations_;
        sol.max_residual = lp_.max_violation(sol.x);
        return sol;
    }

private:
    void build_initial_basis() {
        std::vector<double> r(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < n_; ++j) {
            for (const auto& [i, v] : cols_[static_cast<std::size_t>(j)]) {
                r[static_cast<std::size_t>(i)] += v * x_[static_cast<std::size_t>(j)];
            }
        }
        head_.assign(static_cast<std::size_t>(m_), -1);
        std::vector<double> diag(static_cast<std::size_t>(m_), -1.0);
        for (int i = 0; i < m_; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const auto s = static_cast<std::size_t>(n_ + i);
            if (r[ui] >= lo_[s] - opts_.feasibility_tol && r[ui] <= hi_[s] + opts_.feasibility_tol) {
                head_[ui] = n_ + i;
                x_[s] = r[ui];
                continue;
            }
            const double bound = r[ui] < lo_[s] ? lo_[s] : hi_[s];
            x_[s] = bound;
            const double gap = r[ui] - bound;  // A x - s = gap, cancelled by d * a
            const double d = gap > 0.0 ? -1.0 : 1.0;
            cols_.push_back({{i, d}});
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            x_.push_back(std::abs(gap));
            head_[ui] = static_cast<int>(cols_.size()) - 1;
            diag[ui] = d;
            ++artificials_;
        }
        pos_.assign(cols_.size(), -1);
        for (int i = 0; i < m_; ++i) {
            pos_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = i;
        }
        binv_ = Eigen::MatrixXd::Zero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            binv_(i, i) = 1.0 / diag[static_cast<std::size_t>(i)];
        }
    }

    void refactor() {
        if (m_ == 0) {
            return;
        }
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            for (const auto& [r, v] : cols_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])]) {
                b(r, i) = v;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
        if (!lu.isInvertible()) {
            throw Error("solve_lp: basis became singular");
        }
        binv_ = lu.inverse();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (pos_[j] >= 0 || x_[j] == 0.0) {
                continue;
            }
            for (const auto& [r, v] : cols_[j]) {
                rhs(r) -= v * x_[j];
            }
        }
        const Eigen::VectorXd xb = binv_ * rhs;
        for (int i = 0; i < m_; ++i) {
            x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = xb(i);
        }
    }

    double reduced_cost(std::size_t j, const Eigen::VectorXd& y) const {
        double d = cost_[j];
        for (const auto& [r, v] : cols_[j]) {
            d -= y(r) * v;
        }
        return d;
    }

    void iterate(bool phase_one) {
        int degenerate = 0;
        int since_refactor = 0;
        Eigen::VectorXd cb(m_);
        while (true) {
            if (iterations_ >= opts_.max_iterations) {
                throw Error("solve_lp: iteration limit reached");
            }
            if (since_refactor >= opts_.refactor_every) {
                refactor();
                since_refactor = 0;
            }
            const bool bland = opts_.force_bland || degenerate >= opts_.degenerate_limit;
            for (int i = 0; i < m_; ++i) {
                cb(i) = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
            }
            const Eigen::VectorXd y = binv_.transpose() * cb;

            int q = -1;
            double best = 0.0;
            double dq = 0.0;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (pos_[j] >= 0 || lo_[j] == hi_[j]) {
                    continue;
                }
                const double d = reduced_cost(j, y);
                const bool at_lo = x_[j] == lo_[j];
                const bool at_hi = x_[j] == hi_[j];
                const bool free = !std::isfinite(lo_[j]) && !std::isfinite(hi_[j]);
                const double tol = opts_.optimality_tol;
                const bool eligible = (at_lo && d < -tol) || (at_hi && d > tol) ||
                                      (free && std::abs(d) > tol) ||
                                      (!at_lo && !at_hi && !free && std::abs(d) > tol);
                if (!eligible) {
                    continue;
                }
                if (bland) {
                    q = static_cast<int>(j);
                    dq = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    q = static_cast<int>(j);
                    dq = d;
                }
            }
            if (q < 0) {
                return;
            }
            const auto uq = static_cast<std::size_t>(q);
            const double dir = dq < 0.0 ? 1.0 : -1.0;

            Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
            for (const auto& [r, v] : cols_[uq]) {
                w += v * binv_.col(r);
            }

            double theta = kInf;
            if (dir > 0.0 && std::isfinite(hi_[uq])) {
                theta = hi_[uq] - x_[uq];
            } else if (dir < 0.0 && std::isfinite(lo_[uq])) {
                theta = x_[uq] - lo_[uq];
            }
            int leave = -1;
            double leave_alpha = 0.0;
            constexpr double kPivotTol = 1e-9;
            for (int i = 0; i < m_; ++i) {
                const double alpha = dir * w(i);
                if (std::abs(alpha) <= kPivotTol) {
                    continue;
                }
                const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
                double t = kInf;
                if (alpha > 0.0 && std::isfinite(lo_[b])) {
                    t = (x_[b] - lo_[b]) / alpha;
                } else if (alpha < 0.0 && std::isfinite(hi_[b])) {
                    t = (hi_[b] - x_[b]) / -alpha;
                }
                if (!std::isfinite(t)) {
                    continue;
                }
                t = std::max(t, 0.0);
                bool take = t < theta;
                if (!take && t == theta && leave >= 0) {
                    take = bland ? head_[static_cast<std::size_t>(i)] <
                                       head_[static_cast<std::size_t>(leave)]
                                 : std::abs(alpha) > std::abs(leave_alpha);
                }
                if (take) {
                    theta = t;
                    leave = i;
                    leave_alpha = alpha;
                }
            }
            if (!std::isfinite(theta)) {
                if (phase_one) {
                    throw Error("solve_lp: unbounded auxiliary problem");
                }
                throw LpUnboundedError("solve_lp: objective is unbounded below");
            }

            ++iterations_;
            ++since_refactor;
            degenerate = theta <= opts_.feasibility_tol ? degenerate + 1 : 0;
            x_[uq] += dir * theta;
            for (int i = 0; i < m_; ++i) {
                x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= theta * dir * w(i);
            }
            if (leave < 0) {
                x_[uq] = dir > 0.0 ? hi_[uq] : lo_[uq];
                continue;
            }
            const auto ul = static_cast<std::size_t>(leave);
            const auto p = static_cast<std::size_t>(head_[ul]);
            x_[p] = leave_alpha > 0.0 ? lo_[p] : hi_[p];
            pos_[p] = -1;
            head_[ul] = q;
            pos_[uq] = leave;

            const Eigen::RowVectorXd pivot_row = binv_.row(leave) / w(leave);
            binv_.noalias() -= w * pivot_row;
            binv_.row(leave) = pivot_row;
        }
    }

    const LinearProgram& lp_;
    const LpOptions& opts_;
    int n_ = 0;
    int m_ = 0;
    int artificials_ = 0;
    int iterations_ = 0;
    std::vector<SparseColumn> cols_;
    std::vector<double> lo_, hi_, x_, cost_;
    std::vector<int> head_;
    std::vector<int> pos_;
    Eigen::MatrixXd binv_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
    lp.validate();
    Simplex s(lp, opts);
    return s.run();
}

// ---------------------------------------------------------------------------
// LP text format

namespace {

bool valid_name(const std::string& s) {
    if (s.empty() || s.size() > 255) {
        return false;
    }
    const char c = s.front();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
        c == '+' || c == '-') {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '[' ||
               ch == ']' || ch == '.' || ch == '#';
    });
}

std::vector<std::string> names_or_default(const std::vector<std::string>& given, int count,
                                          char prefix) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    bool ok = static_cast<int>(given.size()) == count;
    for (int k = 0; ok && k < count; ++k) {
        const auto& n = given[static_cast<std::size_t>(k)];
        ok = valid_name(n) && seen.insert(n).second;
    }
    if (ok) {
        return given;
    }
    for (int k = 0; k < count; ++k) {
        out.push_back(std::string(1, prefix) + std::to_string(k));
    }
    return out;
}

std::string num(double v) {
    if (v == kInf) {
        return "inf";
    }
    if (v == -kInf) {
        return "-inf";
    }
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<std::string>& names) {
    int on_line = 0;
    for (const auto& [j, v] : terms) {
        if (on_line == 6) {
            out << "\n   ";
            on_line = 0;
        }
        out << (v < 0.0 || std::signbit(v) ? " - " : " + ") << num(std::abs(v)) << ' '
            << names[static_cast<std::size_t>(j)];
        ++on_line;
    }
}

}  // namespace

void write_lp_text(std::ostream& out, const LinearProgram& lp) {
    lp.validate();
    const auto vars = names_or_default(lp.var_names, lp.num_vars(), 'x');
    const auto rows = names_or_default(lp.row_names, lp.num_rows(), 'c');
    std::vector<std::vector<std::pair<int, double>>> by_row(static_cast<std::size_t>(lp.num_rows()));
    for (const auto& e : lp.entries) {
        by_row[static_cast<std::size_t>(e.row)].push_back({e.col, e.value});
    }

    out << "\\ linear program: " << lp.num_vars() << " variables, " << lp.num_rows() << " rows\n";
    out << "Minimize\n obj:";
    // Zero costs are written too: they fix the column order for readers.
    std::vector<std::pair<int, double>> obj;
    for (int j = 0; j < lp.num_vars(); ++j) {
        obj.push_back({j, lp.cost[static_cast<std::size_t>(j)]});
    }
    write_terms(out, obj, vars);
    if (lp.offset != 0.0) {
        out << (lp.offset < 0.0 ? " - " : " + ") << num(std::abs(lp.offset));
    }
    out << "\nSubject To\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double lo = lp.row_lo[ui];
        const double hi = lp.row_hi[ui];
        auto terms = by_row[ui];
        if (terms.empty() && lp.num_vars() > 0) {
            terms.push_back({0, 0.0});
        }
        out << ' ' << rows[ui] << ':';
        const bool ranged = lo != hi && (std::isfinite(lo) == std::isfinite(hi));
        if (ranged) {
            out << ' ' << num(lo) << " <=";
        }
        write_terms(out, terms, vars);
        if (lo == hi) {
            out << " = " << num(lo);
        } else if (ranged) {
            out << " <= " << num(hi);
        } else if (std::isfinite(lo)) {
            out << " >= " << num(lo);
        } else {
            out << " <= " << num(hi);
        }
        out << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (!std::isfinite(lp.var_lo[uj]) && !std::isfinite(lp.var_hi[uj])) {
            out << ' ' << vars[uj] << " free\n";
        } else {
            out << ' ' << num(lp.var_lo[uj]) << " <= " << vars[uj] << " <= " << num(lp.var_hi[uj])
                << '\n';
        }
    }
    out << "End\n";
}

void export_lp_text(const LinearProgram& lp, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("export_lp_text: cannot open " + path);
    }
    write_lp_text(out, lp);
    if (!out) {
        throw Error("export_lp_text: write failed for " + path);
    }
}

namespace {

class LpReader {
public:
    explicit LpReader(std::istream& in) {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto cut = line.find('\\');
            if (cut != std::string::npos) {
                line.erase(cut);
            }
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                // split "name:" from anything glued after the colon
                const auto colon = tok.find(':');
                if (colon != std::string::npos && colon + 1 < tok.size()) {
                    tokens_.push_back({tok.substr(0, colon + 1), lineno});
                    tokens_.push_back({tok.substr(colon + 1), lineno});
                } else {
                    tokens_.push_back({tok, lineno});
                }
            }
        }
    }

    LinearProgram parse() {
        expect_keyword("minimize");
        if (peek_is_label()) {
            next();
        }
        objective_terms_ = read_terms(true);
        if (lower(peek()) == "subject") {
            next();
            if (lower(peek()) != "to") {
                fail("expected 'To' after 'Subject'");
            }
            next();
        } else if (lower(peek()) == "st" || lower(peek()) == "s.t.") {
            next();
        } else {
            fail("expected 'Subject To'");
        }
        while (!at_end() && !is_section(peek())) {
            read_row();
        }
        for (auto& r : rows_) {
            (void)r;
        }
        // Variables appear in order of first use unless declared in Bounds.
        if (lower(peek()) == "bounds") {
            next();
            while (!at_end() && !is_section(peek())) {
                read_bound();
            }
        }
        if (lower(peek()) != "end") {
            fail("expected 'End'");
        }

        LinearProgram lp;
        for (const auto& name : var_order_) {
            const auto& b = bounds_.count(name) ? bounds_.at(name) : std::pair{0.0, kInf};
            lp.add_variable(name, b.first, b.second, 0.0);
        }
        for (const auto& [j, v] : objective_terms_.first) {
            lp.cost[static_cast<std::size_t>(j)] += v;
        }
        lp.offset = objective_terms_.second;
        for (const auto& r : rows_) {
            const int i = lp.add_row(r.name, r.lo, r.hi);
            for (const auto& [j, v] : r.terms) {
                lp.add_entry(i, j, v);
            }
        }
        lp.validate();
        return lp;
    }

private:
    struct Token {
        std::string text;
        int line = 0;
    };
    struct Row {
        std::string name;
        double lo = -kInf;
        double hi = kInf;
        std::vector<std::pair<int, double>> terms;
    };
    using Terms = std::pair<std::vector<std::pair<int, double>>, double>;

    static std::string lower(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    }

    static bool is_section(const std::string& t) {
        const auto l = lower(t);
        return l == "subject" || l == "st" || l == "s.t." || l == "bounds" || l == "end" ||
               l == "minimize";
    }

    static bool parse_number(const std::string& t, double& v) {
        const auto l = lower(t);
        if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") {
            v = kInf;
            return true;
        }
        if (l == "-inf" || l == "-infinity") {
            v = -kInf;
            return true;
        }
        char* end = nullptr;
        v = std::strtod(t.c_str(), &end);
        return end != t.c_str() && *end == '\0';
    }

    bool at_end() const { return k_ >= tokens_.size(); }
    const std::string& peek() const {
        static const std::string empty;
        return at_end() ? empty : tokens_[k_].text;
    }
    bool peek_is_label() const { return !at_end() && peek().back() == ':'; }
    std::string next() {
        if (at_end()) {
            fail("unexpected end of file");
        }
        return tokens_[k_++].text;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const int line = at_end() ? (tokens_.empty() ? 0 : tokens_.back().line) : tokens_[k_].line;
        throw DataError("LP text, line " + std::to_string(line) + ": " + what);
    }
    void expect_keyword(const std::string& kw) {
        const auto l = lower(next());
        if (l != kw && !(kw == "minimize" && (l == "minimise" || l == "min"))) {
            fail("expected '" + kw + "'");
        }
    }

    int var_index(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) {
            return it->second;
        }
        const int j = static_cast<int>(var_order_.size());
        index_[name] = j;
        var_order_.push_back(name);
        return j;
    }

    // Reads "+ c name" terms until a relational operator or section keyword.
    Terms read_terms(bool allow_constant) {
        Terms out{{}, 0.0};
        while (!at_end() && !is_section(peek()) && !peek_is_label()) {
            const auto& t = peek();
            if (t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>") {
                break;
            }
            double sign = 1.0;
            if (t == "+" || t == "-") {
                sign = t == "-" ? -1.0 : 1.0;
                next();
            }
            double coef = 1.0;
            double v = 0.0;
            if (parse_number(peek(), v)) {
                coef = v;
                next();
                if (at_end() || is_section(peek()) || peek_is_label() || peek() == "+" ||
                    peek() == "-" || peek() == "<=" || peek() == ">=" || peek() == "=") {
                    if (!allow_constant) {
                        fail("constant term in a constraint");
                    }
                    out.second += sign * coef;
                    continue;
                }
            }
            if (!valid_name(peek())) {
                fail("expected a variable name, got '" + peek() + "'");
            }
            const auto name = next();
            out.first.push_back({var_index(name), sign * coef});
        }
        return out;
    }

    double read_number() {
        double v = 0.0;
        if (!parse_number(peek(), v)) {
            fail("expected a number, got '" + peek() + "'");
        }
        next();
        return v;
    }

    void read_row() {
        Row r;
        if (!peek_is_label()) {
            fail("constraint without a name");
        }
        r.name = next();
        r.name.pop_back();
        double v = 0.0;
        bool ranged = false;
        if (parse_number(peek(), v) && k_ + 1 < tokens_.size() && tokens_[k_ + 1].text == "<=") {
            next();
            next();
            r.lo = v;
            ranged = true;
        }
        auto terms = read_terms(false);
        r.terms = std::move(terms.first);
        const auto op = next();
        const double rhs = read_number();
        if (ranged) {
            if (op != "<=" && op != "=<") {
                fail("ranged constraint needs '<=' on both sides");
            }
            r.hi = rhs;
        } else if (op == "<=" || op == "=<") {
            r.hi = rhs;
        } else if (op == ">=" || op == "=>") {
            r.lo = rhs;
        } else if (op == "=") {
            r.lo = r.hi = rhs;
        } else {
            fail("unknown operator '" + op + "'");
        }
        rows_.push_back(std::move(r));
    }

    void read_bound() {
        double lo = 0.0;
        if (parse_number(peek(), lo)) {
            next();
            if (next() != "<=") {
                fail("expected '<=' in bound");
            }
            const auto name = next();
            if (next() != "<=") {
                fail("expected '<=' in bound");
            }
            const double hi = read_number();
            var_index(name);
            bounds_[name] = {lo, hi};
            return;
        }
        const auto name = next();
        const auto what = lower(next());
        var_index(name);
        if (what == "free") {
            bounds_[name] = {-kInf, kInf};
            return;
        }
        const double v = read_number();
        auto b = bounds_.count(name) ? bounds_[name] : std::pair{0.0, kInf};
        if (what == "<=") {
            b.second = v;
        } else if (what == ">=") {
            b.first = v;
        } else if (what == "=") {
            b = {v, v};
        } else {
            fail("bad bound for '" + name + "'");
        }
        bounds_[name] = b;
    }

    std::vector<Token> tokens_;
    std::size_t k_ = 0;
    Terms objective_terms_;
    std::vector<Row> rows_;
    std::map<std::string, int> index_;
    std::vector<std::string> var_order_;
    std::map<std::string, std::pair<double, double>> bounds_;
};

}  // namespace

LinearProgram read_lp_text(std::istream& in) {
    LpReader reader(in);
    return reader.parse();
}

}  // namespace laxhvac
