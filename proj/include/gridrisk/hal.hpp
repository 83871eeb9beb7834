#pragma once

#include <array>
#include <optional>

namespace gridrisk {

// Which side of the threshold is adverse: Below means values under qbar
// are unsafe (reserves), Above means values over qbar are unsafe (shed).
enum class Direction { Below, Above };

// A value sitting exactly at the threshold (a reserve procured to its
// requirement, zero shed) is safe; kBoundaryTol absorbs LP round-off at
// that boundary and is far below any physical MW or dollar signal.
inline constexpr double kBoundaryTol = 1e-3;

inline bool adverse_value(double q, double qbar, Direction direction) {
    return direction == Direction::Below ? q < qbar - kBoundaryTol
                                         : q > qbar + kBoundaryTol;
}

// Hazard-aware loss: piecewise-linear with separate under/over-estimation
// weights in the safe and unsafe regions. The region is decided by the
// TRUE value. Without a threshold every point is safe (operating cost).
struct HalParams {
    double u_safe = 1.05;
    double o_safe = 1.0;
    double u_unsafe = 1.2;
    double o_unsafe = 1.1;
    std::optional<double> qbar;
    Direction direction = Direction::Below;

    bool is_unsafe(double q) const {
        return qbar.has_value() && adverse_value(q, *qbar, direction);
    }
};

// loss = w_u * max(q - qhat, 0) + w_o * max(qhat - q, 0), weights chosen
// by the region of q. Underestimates enter by magnitude.
double hal_loss(double q, double qhat, const HalParams& params);

// d(loss)/d(qhat): -w_u when underestimating, +w_o when overestimating,
// 0 at the kink.
double hal_subgradient(double q, double qhat, const HalParams& params);

}  // namespace gridrisk
