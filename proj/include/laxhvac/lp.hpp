#pragma once

#include "laxhvac/error.hpp"

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace laxhvac {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x + offset  s.t.  row_lo <= A x <= row_hi,  var_lo <= x <= var_hi.
/// A is stored as (row, col, value) triplets; duplicates are summed.
struct LinearProgram {
    struct Entry {
        int row = 0;
        int col = 0;
        double value = 0.0;
    };

    std::vector<double> cost;
    std::vector<double> var_lo;
    std::vector<double> var_hi;
    std::vector<std::string> var_names;
    std::vector<double> row_lo;
    std::vector<double> row_hi;
    std::vector<std::string> row_names;
    std::vector<Entry> entries;
    double offset = 0.0;

    int add_variable(std::string name, double lo, double hi, double c);
    int add_row(std::string name, double lo, double hi);
    void add_entry(int row, int col, double value);

    int num_vars() const noexcept { return static_cast<int>(cost.size()); }
    int num_rows() const noexcept { return static_cast<int>(row_lo.size()); }

    /// Throws PreconditionError naming the offending variable or row.
    void validate() const;
    /// A x for a full-length x.
    std::vector<double> activity(const std::vector<double>& x) const;
    double objective(const std::vector<double>& x) const;
    /// Largest bound or row violation of x.
    double max_violation(const std::vector<double>& x) const;
};

class LpInfeasibleError : public Error {
public:
    using Error::Error;
};

class LpUnboundedError : public Error {
public:
    using Error::Error;
};

struct LpOptions {
    int max_iterations = 200000;
    int refactor_every = 64;
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int degenerate_limit = 50;
    bool force_bland = false;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
    double max_residual = 0.0;
};

/// Dense bounded-variable revised simplex (two phases). Throws
/// LpInfeasibleError or LpUnboundedError.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// Writes the program in CPLEX LP text form (Minimize / Subject To / Bounds /
/// End) with round-trip precision.
void write_lp_text(std::ostream& out, const LinearProgram& lp);
void export_lp_text(const LinearProgram& lp, const std::string& path);
/// Parses the subset of the format that write_lp_text emits.
LinearProgram read_lp_text(std::istream& in);

}  // namespace laxhvac
