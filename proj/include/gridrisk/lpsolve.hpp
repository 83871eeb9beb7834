#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gridrisk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { GreaterEqual, LessEqual, Equal };

// min c'x  s.t.  A x {>=,<=,=} b,  lower <= x <= upper (+-inf allowed).
struct LpProblem {
    std::vector<double> objective;  // n
    std::vector<double> matrix;     // m*n, row-major
    std::vector<RowSense> senses;   // m
    std::vector<double> rhs;        // m
    std::vector<double> lower;      // n
    std::vector<double> upper;      // n

    std::size_t rows() const { return rhs.size(); }
    std::size_t cols() const { return objective.size(); }

    double& at(std::size_t row, std::size_t col) { return matrix[row * cols() + col]; }
    double at(std::size_t row, std::size_t col) const { return matrix[row * cols() + col]; }
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded };

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

// Basis descriptor for warm starts: status per structural+slack variable
// (slack i is variable n+i) plus the basic variable of each row.
struct LpBasis {
    std::vector<VarStatus> status;
    std::vector<std::uint32_t> basic;

    bool empty() const { return status.empty(); }
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> primal;         // n, meaningful when Optimal
    double objective_value = 0.0;
    std::vector<double> duals;          // m row duals (y), when Optimal
    std::vector<double> reduced_costs;  // n, c - A'y, when Optimal
    LpBasis basis;                      // final basis, reusable as warm hint
    int iterations = 0;
};

struct SimplexOptions {
    double feas_tol = 1e-7;     // absolute row-residual / basic-bound tolerance
    double opt_tol = 1e-9;      // reduced-cost tolerance
    double pivot_tol = 1e-9;    // smallest acceptable ratio-test pivot
    int bland_after = 50;       // degenerate pivots before Bland's rule engages
    int refactor_every = 64;    // pivots between basis refactorizations
    int max_iterations = 50000;
};

// Deterministic two-phase bounded-variable revised simplex.
// Throws std::invalid_argument on inconsistent dimensions or crossed
// bounds, std::runtime_error when the pivot tolerance cannot be
// maintained (ill-conditioned input).
LpSolution solve(const LpProblem& problem, const SimplexOptions& options = {});

// Same contract as solve(); tries to reuse `hint` and silently falls
// back to a cold start when the hint does not fit the problem.
LpSolution warm_hint(const LpProblem& problem, const LpBasis& hint,
                     const SimplexOptions& options = {});

// Fixed-layout text dump for golden-file tests.
std::string dump_problem(const LpProblem& problem);

}  // namespace gridrisk
