#include "gridrisk/lpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gridrisk {

namespace {

// Internal column space: [0,n) structural, [n,n+m) slacks, [n+m,n+2m)
// phase-1 artificials. Slack bounds encode the row sense:
//   <=  ->  s in [0, +inf)
//   >=  ->  s in (-inf, 0]
//   =   ->  s in [0, 0]
class Simplex {
public:
    Simplex(const LpProblem& p, const SimplexOptions& opts) : p_(p), opts_(opts) {
        n_ = p.cols();
        m_ = p.rows();
        total_ = n_ + 2 * m_;
        lo_.assign(total_, 0.0);
        up_.assign(total_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = p.lower[j];
            up_[j] = p.upper[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            switch (p.senses[i]) {
                case RowSense::LessEqual:
                    lo_[n_ + i] = 0.0;
                    up_[n_ + i] = kInf;
                    break;
                case RowSense::GreaterEqual:
                    lo_[n_ + i] = -kInf;
                    up_[n_ + i] = 0.0;
                    break;
                case RowSense::Equal:
                    lo_[n_ + i] = 0.0;
                    up_[n_ + i] = 0.0;
                    break;
            }
        }
        // Artificial bounds are set at cold start; frozen to [0,0] otherwise.
        art_sign_.assign(m_, 1.0);
        x_.assign(total_, 0.0);
        status_.assign(total_, VarStatus::AtLower);
        basic_.assign(m_, 0);
        binv_.assign(m_ * m_, 0.0);
        cost_.assign(total_, 0.0);
    }

    LpSolution run(const LpBasis* hint) {
        if (!hint || !try_warm(*hint)) {
            cold_start();
            const double phase1_obj = iterate(/*phase1=*/true);
            if (phase1_obj > opts_.feas_tol * (1.0 + rhs_scale())) {
                LpSolution s;
                s.status = LpStatus::Infeasible;
                s.iterations = iterations_;
                return s;
            }
            drive_out_artificials();
        }
        freeze_artificials();
        load_phase2_costs();
        const bool bounded = iterate_phase2();
        LpSolution s;
        s.iterations = iterations_;
        if (!bounded) {
            s.status = LpStatus::Unbounded;
            return s;
        }
        finish(s);
        return s;
    }

private:
    double rhs_scale() const {
        double s = 0.0;
        for (double b : p_.rhs) s = std::max(s, std::fabs(b));
        return s;
    }

    double col_entry(std::size_t row, std::size_t j) const {
        if (j < n_) return p_.at(row, j);
        if (j < n_ + m_) return (j - n_ == row) ? 1.0 : 0.0;
        return (j - n_ - m_ == row) ? art_sign_[j - n_ - m_] : 0.0;
    }

    // y = B^-T c_B
    void compute_duals(std::vector<double>& y) const {
        y.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basic_[i]];
            if (cb == 0.0) continue;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) y[k] += cb * row[k];
        }
    }

    double reduced_cost(const std::vector<double>& y, std::size_t j) const {
        double d = cost_[j];
        if (j < n_) {
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = p_.at(i, j);
                if (a != 0.0) d -= y[i] * a;
            }
        } else if (j < n_ + m_) {
            d -= y[j - n_];
        } else {
            d -= y[j - n_ - m_] * art_sign_[j - n_ - m_];
        }
        return d;
    }

    // alpha = B^-1 * column(j)
    void ftran(std::size_t j, std::vector<double>& alpha) const {
        alpha.assign(m_, 0.0);
        if (j < n_) {
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = p_.at(i, j);
                if (a == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) alpha[k] += binv_[k * m_ + i] * a;
            }
        } else if (j < n_ + m_) {
            const std::size_t r = j - n_;
            for (std::size_t k = 0; k < m_; ++k) alpha[k] = binv_[k * m_ + r];
        } else {
            const std::size_t r = j - n_ - m_;
            const double s = art_sign_[r];
            for (std::size_t k = 0; k < m_; ++k) alpha[k] = s * binv_[k * m_ + r];
        }
    }

    void set_nonbasic_at_bound(std::size_t j) {
        if (std::isfinite(lo_[j])) {
            status_[j] = VarStatus::AtLower;
            x_[j] = lo_[j];
        } else if (std::isfinite(up_[j])) {
            status_[j] = VarStatus::AtUpper;
            x_[j] = up_[j];
        } else {
            status_[j] = VarStatus::FreeZero;
            x_[j] = 0.0;
        }
    }

    void cold_start() {
        for (std::size_t j = 0; j < n_ + m_; ++j) set_nonbasic_at_bound(j);
        // Residual of the equality system with everything at bounds.
        std::vector<double> r = p_.rhs;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double a = p_.at(i, j);
                if (a != 0.0) r[i] -= a * x_[j];
            }
            r[i] -= x_[n_ + i];
        }
        std::fill(binv_.begin(), binv_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t art = n_ + m_ + i;
            art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
            lo_[art] = 0.0;
            up_[art] = kInf;
            status_[art] = VarStatus::Basic;
            x_[art] = std::fabs(r[i]);
            basic_[i] = static_cast<std::uint32_t>(art);
            binv_[i * m_ + i] = art_sign_[i];
        }
    }

    bool try_warm(const LpBasis& hint) {
        if (hint.status.size() != n_ + m_ || hint.basic.size() != m_) return false;
        std::vector<bool> in_basis(n_ + m_, false);
        for (auto j : hint.basic) {
            if (j >= n_ + m_ || in_basis[j]) return false;
            in_basis[j] = true;
        }
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            const bool basic = hint.status[j] == VarStatus::Basic;
            if (basic != in_basis[j]) return false;
        }
        // Nonbasic placement; a bound status pointing at an infinite bound
        // is incompatible.
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (hint.status[j] == VarStatus::Basic) continue;
            if (hint.status[j] == VarStatus::AtLower) {
                if (!std::isfinite(lo_[j])) return false;
                x_[j] = lo_[j];
            } else if (hint.status[j] == VarStatus::AtUpper) {
                if (!std::isfinite(up_[j])) return false;
                x_[j] = up_[j];
            } else {
                x_[j] = 0.0;
            }
            status_[j] = hint.status[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            basic_[i] = hint.basic[i];
            status_[basic_[i]] = VarStatus::Basic;
        }
        // Freeze artificial columns out of play for the warm path.
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t art = n_ + m_ + i;
            lo_[art] = up_[art] = 0.0;
            x_[art] = 0.0;
            status_[art] = VarStatus::AtLower;
        }
        if (!refactorize(/*throw_on_singular=*/false)) return false;
        recompute_basic_values();
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t j = basic_[i];
            if (x_[j] < lo_[j] - opts_.feas_tol || x_[j] > up_[j] + opts_.feas_tol) return false;
        }
        return true;
    }

    void freeze_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t art = n_ + m_ + i;
            lo_[art] = 0.0;
            up_[art] = 0.0;
            if (status_[art] != VarStatus::Basic) {
                status_[art] = VarStatus::AtLower;
                x_[art] = 0.0;
            }
        }
    }

    void load_phase2_costs() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = p_.objective[j];
    }

    // After phase 1, pivot zero-valued artificials out of the basis where
    // a usable pivot exists; redundant rows keep their artificial, frozen
    // at zero.
    void drive_out_artificials() {
        std::vector<double> y, alpha;
        for (std::size_t pos = 0; pos < m_; ++pos) {
            if (basic_[pos] < n_ + m_) continue;
            std::size_t enter = total_;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (status_[j] == VarStatus::Basic) continue;
                if (lo_[j] == up_[j]) continue;  // fixed, useless as basic
                double piv = 0.0;
                const double* row = &binv_[pos * m_];
                if (j < n_) {
                    for (std::size_t i = 0; i < m_; ++i) {
                        const double a = p_.at(i, j);
                        if (a != 0.0) piv += row[i] * a;
                    }
                } else {
                    piv = row[j - n_];
                }
                if (std::fabs(piv) > 1e-8) {
                    enter = j;
                    break;
                }
            }
            if (enter == total_) continue;  // redundant row
            const std::size_t out = basic_[pos];
            ftran(enter, alpha);
            pivot(enter, pos, alpha);
            // Degenerate swap: entering stays at its current value.
            status_[out] = VarStatus::AtLower;
            x_[out] = 0.0;
        }
    }

    // Returns phase-1 objective (phase 1) — caller checks feasibility.
    double iterate(bool phase1) {
        if (phase1) {
            std::fill(cost_.begin(), cost_.end(), 0.0);
            for (std::size_t i = 0; i < m_; ++i) cost_[n_ + m_ + i] = 1.0;
        }
        const bool bounded = iterate_phase2();
        if (!bounded) throw std::runtime_error("phase-1 subproblem unbounded (internal bug)");
        double obj = 0.0;
        for (std::size_t i = 0; i < m_; ++i) obj += x_[n_ + m_ + i];
        return obj;
    }

    // Core simplex loop on the currently loaded costs. Returns false when
    // the problem is unbounded in the current phase.
    bool iterate_phase2() {
        std::vector<double> y, alpha;
        int stall = 0;
        bool bland = false;
        int since_refactor = 0;
        for (;;) {
            if (++iterations_ > opts_.max_iterations)
                throw std::runtime_error("simplex iteration limit exceeded");
            compute_duals(y);

            std::size_t enter = total_;
            double best_violation = opts_.opt_tol;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                const VarStatus st = status_[j];
                if (st == VarStatus::Basic) continue;
                if (lo_[j] == up_[j]) continue;  // fixed variables never enter
                const double d = reduced_cost(y, j);
                double violation = 0.0;
                if (st == VarStatus::AtLower)
                    violation = -d;
                else if (st == VarStatus::AtUpper)
                    violation = d;
                else
                    violation = std::fabs(d);
                if (violation > best_violation) {
                    enter = j;
                    best_violation = violation;
                    last_d_ = d;
                    if (bland) break;  // lowest eligible index
                }
            }
            if (enter == total_) return true;  // optimal for this phase

            const VarStatus est = status_[enter];
            const double dir =
                (est == VarStatus::AtLower || (est == VarStatus::FreeZero && last_d_ < 0.0))
                    ? 1.0
                    : -1.0;
            ftran(enter, alpha);

            // Ratio test: how far can the entering variable move?
            double t_best = kInf;
            std::ptrdiff_t leave_pos = -1;
            bool leave_to_lower = true;
            if (std::isfinite(lo_[enter]) && std::isfinite(up_[enter]))
                t_best = up_[enter] - lo_[enter];
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = dir * alpha[i];
                const std::size_t bj = basic_[i];
                double t;
                bool to_lower;
                if (a > opts_.pivot_tol) {
                    if (!std::isfinite(lo_[bj])) continue;
                    t = (x_[bj] - lo_[bj]) / a;
                    to_lower = true;
                } else if (a < -opts_.pivot_tol) {
                    if (!std::isfinite(up_[bj])) continue;
                    t = (x_[bj] - up_[bj]) / a;
                    to_lower = false;
                } else {
                    continue;
                }
                if (t < 0.0) t = 0.0;  // drift within feasibility tolerance
                if (t < t_best - 1e-12 ||
                    (t < t_best + 1e-12 && leave_pos >= 0 && bj < basic_[leave_pos])) {
                    t_best = std::min(t, t_best);
                    leave_pos = static_cast<std::ptrdiff_t>(i);
                    leave_to_lower = to_lower;
                }
            }
            if (!std::isfinite(t_best)) return false;  // unbounded ray

            if (t_best <= 1e-10) {
                if (++stall >= opts_.bland_after) bland = true;
            } else {
                stall = 0;
            }

            // Move the entering variable and update basic values.
            for (std::size_t i = 0; i < m_; ++i) {
                if (alpha[i] != 0.0) x_[basic_[i]] -= t_best * dir * alpha[i];
            }
            x_[enter] += t_best * dir;

            if (leave_pos < 0) {
                // Bound flip, basis unchanged.
                status_[enter] =
                    (dir > 0.0) ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[enter] = (dir > 0.0) ? up_[enter] : lo_[enter];
            } else {
                const std::size_t out = basic_[leave_pos];
                status_[out] = leave_to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
                x_[out] = leave_to_lower ? lo_[out] : up_[out];
                pivot(enter, static_cast<std::size_t>(leave_pos), alpha);
                if (++since_refactor >= opts_.refactor_every) {
                    refactorize(/*throw_on_singular=*/true);
                    recompute_basic_values();
                    since_refactor = 0;
                }
            }
        }
    }

    // Replace basis slot `pos` by variable `enter`; rank-one update of binv.
    void pivot(std::size_t enter, std::size_t pos, const std::vector<double>& alpha) {
        const double piv = alpha[pos];
        if (std::fabs(piv) < opts_.pivot_tol)
            throw std::runtime_error("pivot below tolerance; problem is ill-conditioned");
        double* prow = &binv_[pos * m_];
        const double inv = 1.0 / piv;
        for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == pos) continue;
            const double f = alpha[i];
            if (f == 0.0) continue;
            double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
        }
        basic_[pos] = static_cast<std::uint32_t>(enter);
        status_[enter] = VarStatus::Basic;
    }

    // Rebuild binv from the basic set by Gauss-Jordan with partial
    // pivoting. Returns false (or throws) on a numerically singular basis.
    bool refactorize(bool throw_on_singular) {
        std::vector<double> b(m_ * m_, 0.0);
        for (std::size_t c = 0; c < m_; ++c)
            for (std::size_t r = 0; r < m_; ++r) b[r * m_ + c] = col_entry(r, basic_[c]);
        std::fill(binv_.begin(), binv_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t pr = c;
            double pv = std::fabs(b[c * m_ + c]);
            for (std::size_t r = c + 1; r < m_; ++r) {
                const double v = std::fabs(b[r * m_ + c]);
                if (v > pv) {
                    pv = v;
                    pr = r;
                }
            }
            if (pv < 1e-11) {
                if (throw_on_singular)
                    throw std::runtime_error("singular basis during refactorization");
                return false;
            }
            if (pr != c) {
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(b[pr * m_ + k], b[c * m_ + k]);
                    std::swap(binv_[pr * m_ + k], binv_[c * m_ + k]);
                }
            }
            const double inv = 1.0 / b[c * m_ + c];
            for (std::size_t k = 0; k < m_; ++k) {
                b[c * m_ + k] *= inv;
                binv_[c * m_ + k] *= inv;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = b[r * m_ + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    b[r * m_ + k] -= f * b[c * m_ + k];
                    binv_[r * m_ + k] -= f * binv_[c * m_ + k];
                }
            }
        }
        return true;
    }

    void recompute_basic_values() {
        std::vector<double> r = p_.rhs;
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
            if (j < n_) {
                for (std::size_t i = 0; i < m_; ++i) {
                    const double a = p_.at(i, j);
                    if (a != 0.0) r[i] -= a * x_[j];
                }
            } else {
                r[j - n_] -= x_[j];
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double v = 0.0;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) v += row[k] * r[k];
            x_[basic_[i]] = v;
        }
    }

    void finish(LpSolution& s) {
        refactorize(/*throw_on_singular=*/true);
        recompute_basic_values();

        s.primal.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) s.primal[j] = x_[j];
        s.objective_value = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s.objective_value += p_.objective[j] * x_[j];

        std::vector<double> y;
        compute_duals(y);
        s.duals = y;
        s.reduced_costs.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) s.reduced_costs[j] = reduced_cost(y, j);

        verify_feasible();
        s.status = LpStatus::Optimal;

        s.basis.status.assign(status_.begin(), status_.begin() + n_ + m_);
        s.basis.basic.assign(basic_.begin(), basic_.end());
        for (std::size_t i = 0; i < m_; ++i) {
            if (s.basis.basic[i] >= n_ + m_) {
                // Redundant row kept its artificial; hand the equivalent
                // slack to the caller so the descriptor stays reusable.
                const std::uint32_t slack = static_cast<std::uint32_t>(n_ + (s.basis.basic[i] - n_ - m_));
                s.basis.basic[i] = slack;
                s.basis.status[slack] = VarStatus::Basic;
            }
        }
    }

    void verify_feasible() const {
        const double bscale = 1.0 + rhs_scale();
        for (std::size_t i = 0; i < m_; ++i) {
            // True residual, excluding any artificial still parked in a
            // redundant row (its value is bounded by the phase-1 check).
            double lhs = x_[n_ + i];
            for (std::size_t j = 0; j < n_; ++j) {
                const double a = p_.at(i, j);
                if (a != 0.0) lhs += a * x_[j];
            }
            if (std::fabs(lhs - p_.rhs[i]) > opts_.feas_tol * bscale)
                throw std::runtime_error("solution failed row-residual verification");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double span = 1.0 + std::fabs(x_[j]);
            if (x_[j] < lo_[j] - 1e-9 * span || x_[j] > up_[j] + 1e-9 * span)
                throw std::runtime_error("solution failed bound verification");
        }
    }

    const LpProblem& p_;
    const SimplexOptions& opts_;
    std::size_t n_ = 0, m_ = 0, total_ = 0;
    std::vector<double> lo_, up_, x_, cost_, binv_;
    std::vector<double> art_sign_;
    std::vector<VarStatus> status_;
    std::vector<std::uint32_t> basic_;
    int iterations_ = 0;
    double last_d_ = 0.0;
};

void check_dimensions(const LpProblem& p) {
    const std::size_t n = p.cols();
    const std::size_t m = p.rows();
    if (p.matrix.size() != n * m)
        throw std::invalid_argument("LP matrix size does not match rows*cols");
    if (p.senses.size() != m) throw std::invalid_argument("LP senses size mismatch");
    if (p.lower.size() != n || p.upper.size() != n)
        throw std::invalid_argument("LP bound vector size mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        if (p.lower[j] > p.upper[j])
            throw std::invalid_argument("LP variable has lower > upper");
        if (std::isnan(p.lower[j]) || std::isnan(p.upper[j]))
            throw std::invalid_argument("LP variable has NaN bound");
    }
}

}  // namespace

LpSolution solve(const LpProblem& problem, const SimplexOptions& options) {
    check_dimensions(problem);
    Simplex s(problem, options);
    return s.run(nullptr);
}

LpSolution warm_hint(const LpProblem& problem, const LpBasis& hint,
                     const SimplexOptions& options) {
    check_dimensions(problem);
    Simplex s(problem, options);
    return s.run(hint.empty() ? nullptr : &hint);
}

std::string dump_problem(const LpProblem& p) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[32];
        if (v == kInf) return std::string("+inf");
        if (v == -kInf) return std::string("-inf");
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    out << "minimize\n ";
    for (std::size_t j = 0; j < p.cols(); ++j) out << ' ' << num(p.objective[j]);
    out << "\nsubject to\n";
    for (std::size_t i = 0; i < p.rows(); ++i) {
        out << "  r" << i << ':';
        for (std::size_t j = 0; j < p.cols(); ++j) out << ' ' << num(p.at(i, j));
        switch (p.senses[i]) {
            case RowSense::GreaterEqual: out << " >= "; break;
            case RowSense::LessEqual: out << " <= "; break;
            case RowSense::Equal: out << " == "; break;
        }
        out << num(p.rhs[i]) << '\n';
    }
    out << "bounds\n";
    for (std::size_t j = 0; j < p.cols(); ++j)
        out << "  x" << j << " in [" << num(p.lower[j]) << ", " << num(p.upper[j]) << "]\n";
    return out.str();
}

}  // namespace gridrisk
