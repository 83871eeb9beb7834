#pragma once

// Brute-force LP oracle for small box-bounded problems: enumerates every
// basic candidate point (each subset of n active constraints drawn from
// rows-as-equalities plus bounds), keeps the feasible ones, and returns
// the best objective. Exponential and test-only by design; independent
// of the simplex implementation.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gridrisk/lpsolve.hpp"

namespace gridrisk::testing {

struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> point;
};

namespace detail {

// Solve square system via Gaussian elimination; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(std::vector<double> a,
                                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pr = c;
        double pv = std::fabs(a[c * n + c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(a[r * n + c]) > pv) {
                pv = std::fabs(a[r * n + c]);
                pr = r;
            }
        }
        if (pv < 1e-10) return std::nullopt;
        if (pr != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[pr * n + k], a[c * n + k]);
            std::swap(b[pr], b[c]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r * n + c] / a[c * n + c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i * n + i];
    return x;
}

inline bool feasible_point(const LpProblem& p, const std::vector<double>& x, double tol) {
    for (std::size_t j = 0; j < p.cols(); ++j)
        if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) lhs += p.at(i, j) * x[j];
        switch (p.senses[i]) {
            case RowSense::GreaterEqual:
                if (lhs < p.rhs[i] - tol) return false;
                break;
            case RowSense::LessEqual:
                if (lhs > p.rhs[i] + tol) return false;
                break;
            case RowSense::Equal:
                if (std::fabs(lhs - p.rhs[i]) > tol) return false;
                break;
        }
    }
    return true;
}

}  // namespace detail

// Requires every variable bound finite (the feasible set is a polytope,
// so feasibility is equivalent to having a feasible vertex).
inline OracleResult enumerate_vertices(const LpProblem& p, double tol = 1e-7) {
    const std::size_t n = p.cols();
    const std::size_t m = p.rows();

    // Candidate active constraints: rows 0..m-1, then lower bound of
    // variable j (m + 2j), upper bound (m + 2j + 1).
    const std::size_t total = m + 2 * n;
    std::vector<std::size_t> combo(n);
    OracleResult best;

    std::vector<double> a(n * n), b(n);
    auto try_combo = [&]() {
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t c = combo[r];
            if (c < m) {
                for (std::size_t j = 0; j < n; ++j) a[r * n + j] = p.at(c, j);
                b[r] = p.rhs[c];
            } else {
                const std::size_t j = (c - m) / 2;
                for (std::size_t k = 0; k < n; ++k) a[r * n + k] = (k == j) ? 1.0 : 0.0;
                b[r] = ((c - m) % 2 == 0) ? p.lower[j] : p.upper[j];
            }
        }
        const auto x = detail::solve_square(a, b);
        if (!x || !detail::feasible_point(p, *x, tol)) return;
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * (*x)[j];
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.point = *x;
        }
    };

    // Enumerate all size-n subsets of the candidate constraints.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (total < n) return best;
    for (;;) {
        combo = idx;
        try_combo();
        std::size_t i = n;
        while (i-- > 0) {
            if (idx[i] + (n - i) < total) {
                ++idx[i];
                for (std::size_t k = i + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
                break;
            }
            if (i == 0) return best;
        }
    }
}

// Seeded random box-bounded LP for oracle comparison.
inline LpProblem random_boxed_lp(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
    };
    LpProblem p;
    const std::size_t n = 1 + static_cast<std::size_t>(eng() % 6);
    const std::size_t m = static_cast<std::size_t>(eng() % 7);
    p.objective.resize(n);
    for (auto& c : p.objective) c = std::round(uni(-5.0, 5.0) * 4.0) / 4.0;
    p.lower.resize(n);
    p.upper.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        p.lower[j] = std::round(uni(-3.0, 0.0) * 4.0) / 4.0;
        p.upper[j] = p.lower[j] + std::round(uni(0.5, 4.0) * 4.0) / 4.0;
    }
    p.matrix.assign(m * n, 0.0);
    p.senses.resize(m);
    p.rhs.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = uni(-5.0, 5.0);
            p.at(i, j) = std::fabs(v) < 1.5 ? 0.0 : std::round(v);
        }
        const std::size_t kind = eng() % 8;
        p.senses[i] = kind < 4   ? RowSense::LessEqual
                      : kind < 7 ? RowSense::GreaterEqual
                                 : RowSense::Equal;
        p.rhs[i] = std::round(uni(-4.0, 4.0) * 2.0) / 2.0;
    }
    return p;
}

}  // namespace gridrisk::testing
