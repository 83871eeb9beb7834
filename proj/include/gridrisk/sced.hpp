#pragma once

#include <string>
#include <vector>

#include "gridrisk/grid_model.hpp"
#include "gridrisk/lpsolve.hpp"

namespace gridrisk {

// Per-generator output of one dispatch interval. p[g] == 0 for
// uncommitted generators.
struct DispatchState {
    std::vector<double> p;  // MW, indexed like SystemModel::generators
};

void validate_dispatch(const DispatchState& state, const SystemModel& system,
                       const std::vector<bool>& commitment);

// The four quantities of interest for one 5-minute step.
struct QoiSample {
    double cost = 0.0;         // $ for the step
    double load_shed = 0.0;    // MW
    double reg_reserve = 0.0;  // MW procured
    double op_reserve = 0.0;   // MW procured (includes regulating)
};

inline constexpr std::size_t kNumQois = 4;
inline const char* const kQoiNames[kNumQois] = {"cost", "load_shed", "reg_reserve",
                                                "op_reserve"};

// Column/row layout of a built SCED LP, used for QoI extraction and by
// the recompute-from-primal test oracle.
struct ScedLayout {
    std::vector<int> p_col;       // per generator, -1 if uncommitted
    std::vector<int> reg_col;     // per generator, -1 if not reg-capable/committed
    std::vector<int> spin_col;    // per generator, -1 if uncommitted
    std::vector<int> shed_col;    // per zone
    std::vector<int> curtail_col; // per zone
    std::vector<int> over_gen_col; // per zone
    std::vector<int> export_col;  // per zone
    int reg_short_col = -1;
    int op_short_col = -1;
    std::size_t cols = 0;
};

struct ScedProblem {
    LpProblem lp;
    ScedLayout layout;
};

// Single-period dispatch LP. Variables: committed generators' output,
// regulating and spinning reserve, per-zone shed / renewable curtailment /
// emergency excess-energy disposal / net export, and the two system
// reserve-shortfall slacks. Shed, curtailment, disposal and shortfall
// slacks make the LP feasible by construction for any realization: the
// disposal slack (priced at voll, like shed) absorbs must-run output
// that ramp floors cannot back down in time.
ScedProblem build_sced(const SystemModel& system, const std::vector<bool>& commitment,
                       const DispatchState& prev, const Realization& realization);

struct ScedResult {
    DispatchState dispatch;
    QoiSample qoi;
    LpBasis basis;  // for warm-starting the next step in a chain
};

ScedResult solve_sced(const SystemModel& system, const std::vector<bool>& commitment,
                      const DispatchState& prev, const Realization& realization,
                      const LpBasis* warm = nullptr);

// Applies the hour-boundary commitment transition to the previous
// dispatch: newly committed units enter at p_min, de-committed units
// drop to zero.
DispatchState transition_dispatch(const DispatchState& prev, const SystemModel& system,
                                  const std::vector<bool>& commitment);

// Chains SCEDs over `trajectory`, with commitment switching at hour
// boundaries. `start_step` is the absolute 5-minute step of
// trajectory[0] and selects the schedule hour (step 12h..12h+11 -> hour
// h). Full-day runs use start_step = 0 and a 288-step trajectory.
std::vector<QoiSample> simulate_span(const SystemModel& system,
                                     const CommitmentSchedule& schedule,
                                     const DispatchState& y0, const Trajectory& trajectory,
                                     std::size_t start_step,
                                     std::vector<DispatchState>* dispatches = nullptr);

std::vector<QoiSample> simulate_day(const SystemModel& system,
                                    const CommitmentSchedule& schedule,
                                    const DispatchState& y0, const Trajectory& trajectory,
                                    std::vector<DispatchState>* dispatches = nullptr);

// A neutral initial dispatch: every hour-0 committed unit at p_min.
DispatchState initial_dispatch(const SystemModel& system, const CommitmentSchedule& schedule);

}  // namespace gridrisk
