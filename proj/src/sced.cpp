#include "gridrisk/sced.hpp"

#include <cmath>
#include <stdexcept>

namespace gridrisk {

void validate_dispatch(const DispatchState& state, const SystemModel& system,
                       const std::vector<bool>& commitment) {
    if (state.p.size() != system.generators.size())
        throw std::runtime_error("dispatch size does not match generator count");
    if (commitment.size() != system.generators.size())
        throw std::runtime_error("commitment size does not match generator count");
    for (std::size_t g = 0; g < state.p.size(); ++g) {
        const auto& gen = system.generators[g];
        if (!commitment[g]) {
            if (state.p[g] != 0.0)
                throw std::runtime_error("uncommitted generator " + gen.id +
                                         " has nonzero output");
        } else if (state.p[g] < gen.p_min - 1e-6 || state.p[g] > gen.p_max + 1e-6) {
            throw std::runtime_error("generator " + gen.id + " output outside limits");
        }
    }
}

ScedProblem build_sced(const SystemModel& system, const std::vector<bool>& commitment,
                       const DispatchState& prev, const Realization& realization) {
    const std::size_t ng = system.generators.size();
    const std::size_t nz = system.zones.size();
    if (commitment.size() != ng)
        throw std::runtime_error("commitment size does not match generator count");
    if (prev.p.size() != ng)
        throw std::runtime_error("previous dispatch size does not match generator count");

    ScedLayout layout;
    layout.p_col.assign(ng, -1);
    layout.reg_col.assign(ng, -1);
    layout.spin_col.assign(ng, -1);
    layout.shed_col.assign(nz, -1);
    layout.curtail_col.assign(nz, -1);
    layout.over_gen_col.assign(nz, -1);
    layout.export_col.assign(nz, -1);

    std::size_t col = 0;
    for (std::size_t g = 0; g < ng; ++g)
        if (commitment[g]) layout.p_col[g] = static_cast<int>(col++);
    for (std::size_t g = 0; g < ng; ++g)
        if (commitment[g] && system.generators[g].reg_capable)
            layout.reg_col[g] = static_cast<int>(col++);
    for (std::size_t g = 0; g < ng; ++g)
        if (commitment[g]) layout.spin_col[g] = static_cast<int>(col++);
    for (std::size_t z = 0; z < nz; ++z) layout.shed_col[z] = static_cast<int>(col++);
    for (std::size_t z = 0; z < nz; ++z) layout.curtail_col[z] = static_cast<int>(col++);
    for (std::size_t z = 0; z < nz; ++z) layout.over_gen_col[z] = static_cast<int>(col++);
    for (std::size_t z = 0; z < nz; ++z) layout.export_col[z] = static_cast<int>(col++);
    layout.reg_short_col = static_cast<int>(col++);
    layout.op_short_col = static_cast<int>(col++);
    layout.cols = col;

    std::size_t committed = 0, reg_capable = 0;
    for (std::size_t g = 0; g < ng; ++g) {
        if (!commitment[g]) continue;
        ++committed;
        if (system.generators[g].reg_capable) ++reg_capable;
    }

    // Rows: zonal balance, export sum, ramp up/down and headroom per
    // committed unit, reg capability per reg-capable unit, two
    // system-wide reserve adequacy rows.
    const std::size_t rows = nz + 1 + 3 * committed + reg_capable + 2;

    LpProblem lp;
    lp.objective.assign(layout.cols, 0.0);
    lp.lower.assign(layout.cols, 0.0);
    lp.upper.assign(layout.cols, 0.0);
    lp.matrix.assign(rows * layout.cols, 0.0);
    lp.senses.assign(rows, RowSense::Equal);
    lp.rhs.assign(rows, 0.0);

    const double step_h = kHoursPerStep;
    for (std::size_t g = 0; g < ng; ++g) {
        if (!commitment[g]) continue;
        const auto& gen = system.generators[g];
        const int pc = layout.p_col[g];
        lp.objective[pc] = gen.energy_cost * step_h;
        lp.lower[pc] = gen.p_min;
        lp.upper[pc] = gen.p_max;
        if (layout.reg_col[g] >= 0) {
            lp.lower[layout.reg_col[g]] = 0.0;
            lp.upper[layout.reg_col[g]] = kInf;  // capped by its own row
        }
        lp.lower[layout.spin_col[g]] = 0.0;
        lp.upper[layout.spin_col[g]] = kInf;  // capped by the headroom row
    }
    for (std::size_t z = 0; z < nz; ++z) {
        lp.objective[layout.shed_col[z]] = system.voll * step_h;
        lp.lower[layout.shed_col[z]] = 0.0;
        lp.upper[layout.shed_col[z]] = kInf;
        const double renewable = realization.zonal_wind.at(system.zones[z]) +
                                 realization.zonal_solar.at(system.zones[z]);
        lp.lower[layout.curtail_col[z]] = 0.0;
        lp.upper[layout.curtail_col[z]] = renewable;
        lp.objective[layout.over_gen_col[z]] = system.voll * step_h;
        lp.lower[layout.over_gen_col[z]] = 0.0;
        lp.upper[layout.over_gen_col[z]] = kInf;
        const double cap = system.export_limit(system.zones[z]);
        lp.lower[layout.export_col[z]] = -cap;
        lp.upper[layout.export_col[z]] = cap;
    }
    lp.objective[layout.reg_short_col] = system.effective_reg_penalty() * step_h;
    lp.lower[layout.reg_short_col] = 0.0;
    lp.upper[layout.reg_short_col] = kInf;
    lp.objective[layout.op_short_col] = system.reserve_penalty * step_h;
    lp.lower[layout.op_short_col] = 0.0;
    lp.upper[layout.op_short_col] = kInf;

    std::size_t row = 0;
    // (a) zonal balance:
    //     sum(p) + shed - curtail - over_gen - net_export = load - wind - solar
    for (std::size_t z = 0; z < nz; ++z, ++row) {
        const auto& zone = system.zones[z];
        for (std::size_t g = 0; g < ng; ++g)
            if (layout.p_col[g] >= 0 && system.generators[g].zone == zone)
                lp.at(row, layout.p_col[g]) = 1.0;
        lp.at(row, layout.shed_col[z]) = 1.0;
        lp.at(row, layout.curtail_col[z]) = -1.0;
        lp.at(row, layout.over_gen_col[z]) = -1.0;
        lp.at(row, layout.export_col[z]) = -1.0;
        lp.senses[row] = RowSense::Equal;
        lp.rhs[row] = realization.zonal_load.at(zone) - realization.zonal_wind.at(zone) -
                      realization.zonal_solar.at(zone);
    }
    // (b) exports net to zero across the system.
    for (std::size_t z = 0; z < nz; ++z) lp.at(row, layout.export_col[z]) = 1.0;
    lp.senses[row] = RowSense::Equal;
    lp.rhs[row] = 0.0;
    ++row;
    // (d) ramp limits around the previous output.
    for (std::size_t g = 0; g < ng; ++g) {
        if (layout.p_col[g] < 0) continue;
        const auto& gen = system.generators[g];
        lp.at(row, layout.p_col[g]) = 1.0;
        lp.senses[row] = RowSense::LessEqual;
        lp.rhs[row] = prev.p[g] + gen.ramp_rate;
        ++row;
        lp.at(row, layout.p_col[g]) = 1.0;
        lp.senses[row] = RowSense::GreaterEqual;
        lp.rhs[row] = prev.p[g] - gen.ramp_rate;
        ++row;
    }
    // (e) reserve headroom cannot exceed capacity.
    for (std::size_t g = 0; g < ng; ++g) {
        if (layout.p_col[g] < 0) continue;
        lp.at(row, layout.p_col[g]) = 1.0;
        if (layout.reg_col[g] >= 0) lp.at(row, layout.reg_col[g]) = 1.0;
        lp.at(row, layout.spin_col[g]) = 1.0;
        lp.senses[row] = RowSense::LessEqual;
        lp.rhs[row] = system.generators[g].p_max;
        ++row;
    }
    // (f) regulating reserve is limited by 5-minute ramp capability.
    for (std::size_t g = 0; g < ng; ++g) {
        if (layout.reg_col[g] < 0) continue;
        lp.at(row, layout.reg_col[g]) = 1.0;
        lp.senses[row] = RowSense::LessEqual;
        lp.rhs[row] = system.generators[g].ramp_rate;
        ++row;
    }
    // (g) reserve adequacy with shortfall slacks.
    for (std::size_t g = 0; g < ng; ++g)
        if (layout.reg_col[g] >= 0) lp.at(row, layout.reg_col[g]) = 1.0;
    lp.at(row, layout.reg_short_col) = 1.0;
    lp.senses[row] = RowSense::GreaterEqual;
    lp.rhs[row] = system.mrr_reg;
    ++row;
    for (std::size_t g = 0; g < ng; ++g) {
        if (layout.reg_col[g] >= 0) lp.at(row, layout.reg_col[g]) = 1.0;
        if (layout.spin_col[g] >= 0) lp.at(row, layout.spin_col[g]) = 1.0;
    }
    lp.at(row, layout.op_short_col) = 1.0;
    lp.senses[row] = RowSense::GreaterEqual;
    lp.rhs[row] = system.mrr_op;
    ++row;

    return ScedProblem{std::move(lp), std::move(layout)};
}

ScedResult solve_sced(const SystemModel& system, const std::vector<bool>& commitment,
                      const DispatchState& prev, const Realization& realization,
                      const LpBasis* warm) {
    const ScedProblem sp = build_sced(system, commitment, prev, realization);
    LpSolution sol = warm ? warm_hint(sp.lp, *warm) : solve(sp.lp);
    if (sol.status == LpStatus::Infeasible)
        throw std::runtime_error(
            "SCED LP reported infeasible; the formulation makes this impossible "
            "(internal bug or corrupt input)");
    if (sol.status == LpStatus::Unbounded)
        throw std::runtime_error("SCED LP reported unbounded (internal bug)");

    ScedResult result;
    result.dispatch.p.assign(system.generators.size(), 0.0);
    QoiSample q;
    q.cost = sol.objective_value;
    for (std::size_t g = 0; g < system.generators.size(); ++g) {
        if (sp.layout.p_col[g] >= 0) result.dispatch.p[g] = sol.primal[sp.layout.p_col[g]];
        if (sp.layout.reg_col[g] >= 0) q.reg_reserve += sol.primal[sp.layout.reg_col[g]];
        if (sp.layout.spin_col[g] >= 0) q.op_reserve += sol.primal[sp.layout.spin_col[g]];
    }
    q.op_reserve += q.reg_reserve;
    for (std::size_t z = 0; z < system.zones.size(); ++z)
        q.load_shed += sol.primal[sp.layout.shed_col[z]];
    // Snap solver-tolerance negatives to the invariant.
    if (q.load_shed < 0.0) q.load_shed = 0.0;
    if (q.reg_reserve < 0.0) q.reg_reserve = 0.0;
    if (q.op_reserve < q.reg_reserve) q.op_reserve = q.reg_reserve;
    if (q.cost < 0.0) q.cost = 0.0;
    result.qoi = q;
    result.basis = std::move(sol.basis);
    return result;
}

DispatchState transition_dispatch(const DispatchState& prev, const SystemModel& system,
                                  const std::vector<bool>& commitment) {
    DispatchState next;
    next.p.assign(prev.p.size(), 0.0);
    for (std::size_t g = 0; g < prev.p.size(); ++g) {
        if (!commitment[g]) continue;  // de-committed units drop to zero
        const double pmin = system.generators[g].p_min;
        next.p[g] = (prev.p[g] < pmin) ? pmin : prev.p[g];
    }
    return next;
}

std::vector<QoiSample> simulate_span(const SystemModel& system,
                                     const CommitmentSchedule& schedule,
                                     const DispatchState& y0, const Trajectory& trajectory,
                                     std::size_t start_step,
                                     std::vector<DispatchState>* dispatches) {
    validate_schedule(schedule, system);
    if (start_step + trajectory.size() > kStepsPerDay)
        throw std::runtime_error("trajectory extends past the end of the day");

    std::vector<QoiSample> qois;
    qois.reserve(trajectory.size());
    if (dispatches) {
        dispatches->clear();
        dispatches->reserve(trajectory.size());
    }

    DispatchState prev = y0;
    LpBasis basis;
    std::size_t current_hour = kStepsPerDay;  // force transition on first step
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const std::size_t abs_step = start_step + t;
        const std::size_t hour = abs_step / kStepsPerHour;
        if (hour != current_hour) {
            prev = transition_dispatch(prev, system, schedule.on_status[hour]);
            current_hour = hour;
            basis = LpBasis{};  // variable set may have changed
        }
        try {
            ScedResult r = solve_sced(system, schedule.on_status[hour], prev,
                                      trajectory[t], basis.empty() ? nullptr : &basis);
            prev = r.dispatch;
            basis = std::move(r.basis);
            qois.push_back(r.qoi);
            if (dispatches) dispatches->push_back(prev);
        } catch (const std::exception& e) {
            throw std::runtime_error("SCED failed at step " + std::to_string(abs_step) +
                                     ": " + e.what());
        }
    }
    return qois;
}

std::vector<QoiSample> simulate_day(const SystemModel& system,
                                    const CommitmentSchedule& schedule,
                                    const DispatchState& y0, const Trajectory& trajectory,
                                    std::vector<DispatchState>* dispatches) {
    if (trajectory.size() != kStepsPerDay)
        throw std::runtime_error("day simulation requires a 288-step trajectory");
    return simulate_span(system, schedule, y0, trajectory, 0, dispatches);
}

DispatchState initial_dispatch(const SystemModel& system, const CommitmentSchedule& schedule) {
    DispatchState y0;
    y0.p.assign(system.generators.size(), 0.0);
    for (std::size_t g = 0; g < system.generators.size(); ++g)
        if (schedule.on_status[0][g]) y0.p[g] = system.generators[g].p_min;
    return y0;
}

}  // namespace gridrisk
