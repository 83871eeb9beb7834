#include "gridrisk/hal.hpp"

#include <stdexcept>

namespace gridrisk {

namespace {

void check(const HalParams& p) {
    if (p.u_safe < 0.0 || p.o_safe < 0.0 || p.u_unsafe < 0.0 || p.o_unsafe < 0.0)
        throw std::invalid_argument("HAL weights must be >= 0");
    if (p.u_safe == 0.0 && p.o_safe == 0.0 && p.u_unsafe == 0.0 && p.o_unsafe == 0.0)
        throw std::invalid_argument("at least one HAL weight must be > 0");
}

}  // namespace

double hal_loss(double q, double qhat, const HalParams& params) {
    check(params);
    const bool unsafe = params.is_unsafe(q);
    const double w_u = unsafe ? params.u_unsafe : params.u_safe;
    const double w_o = unsafe ? params.o_unsafe : params.o_safe;
    const double err = qhat - q;
    return err >= 0.0 ? w_o * err : w_u * (-err);
}

double hal_subgradient(double q, double qhat, const HalParams& params) {
    check(params);
    const bool unsafe = params.is_unsafe(q);
    if (qhat < q) return -(unsafe ? params.u_unsafe : params.u_safe);
    if (qhat > q) return unsafe ? params.o_unsafe : params.o_safe;
    return 0.0;
}

}  // namespace gridrisk
