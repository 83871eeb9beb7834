#include "doctest.h"

#include <cmath>

#include "gridrisk/pipeline.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/sced.hpp"

using namespace gridrisk;

namespace {

SystemModel one_gen_system(double p_min, double p_max, double ramp, double cost,
                           double mrr_reg = 0.0, double mrr_op = 0.0) {
    SystemModel s;
    s.zones = {"z"};
    s.zonal_export_limit = {{"z", 0.0}};
    s.mrr_reg = mrr_reg;
    s.mrr_op = mrr_op;
    s.generators = {Generator{"g", "z", p_min, p_max, ramp, cost, true}};
    return s;
}

Realization flat(double load, double wind = 0.0, double solar = 0.0) {
    return Realization{{{"z", load}}, {{"z", wind}}, {{"z", solar}}};
}

// Independent QoI accumulation straight from the LP primal vector — the
// recompute oracle for solve_sced's extraction.
QoiSample recompute_qois(const ScedProblem& sp, const std::vector<double>& primal,
                         const SystemModel& system) {
    QoiSample q;
    for (std::size_t j = 0; j < sp.lp.cols(); ++j)
        q.cost += sp.lp.objective[j] * primal[j];
    for (std::size_t g = 0; g < system.generators.size(); ++g) {
        if (sp.layout.reg_col[g] >= 0) q.reg_reserve += primal[sp.layout.reg_col[g]];
        if (sp.layout.spin_col[g] >= 0) q.op_reserve += primal[sp.layout.spin_col[g]];
    }
    q.op_reserve += q.reg_reserve;
    for (std::size_t z = 0; z < system.zones.size(); ++z)
        q.load_shed += primal[sp.layout.shed_col[z]];
    return q;
}

}  // namespace

TEST_CASE("feasible single-generator dispatch meets load at cost/12") {
    const SystemModel s = one_gen_system(0.0, 100.0, 100.0, 10.0);
    const DispatchState prev{{0.0}};
    const auto [dispatch, qoi, basis] =
        solve_sced(s, {true}, prev, flat(80.0), nullptr);
    CHECK(dispatch.p[0] == doctest::Approx(80.0).epsilon(1e-9));
    CHECK(qoi.cost == doctest::Approx(800.0 / 12.0).epsilon(1e-9));
    CHECK(qoi.load_shed == doctest::Approx(0.0));
    CHECK(qoi.reg_reserve >= 0.0);
    CHECK(qoi.op_reserve >= qoi.reg_reserve);
}

TEST_CASE("capacity shortfall forces shed priced at voll") {
    const SystemModel s = one_gen_system(0.0, 100.0, 100.0, 10.0);
    const auto r = solve_sced(s, {true}, DispatchState{{0.0}}, flat(120.0), nullptr);
    CHECK(r.dispatch.p[0] == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(r.qoi.load_shed == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(r.qoi.cost ==
          doctest::Approx((100.0 * 10.0 + 3500.0 * 20.0) / 12.0).epsilon(1e-9));
}

TEST_CASE("ramp limit binds before capacity") {
    const SystemModel s = one_gen_system(0.0, 100.0, 10.0, 10.0);
    const auto r = solve_sced(s, {true}, DispatchState{{50.0}}, flat(80.0), nullptr);
    CHECK(r.dispatch.p[0] == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(r.qoi.load_shed == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("randomized desk steps: extracted QoIs match the primal recompute oracle") {
    const SystemModel desk = build_desk_system();
    Rng rng(2024);
    const std::vector<bool> commitment(desk.generators.size(), true);
    for (int rep = 0; rep < 25; ++rep) {
        DispatchState prev;
        prev.p.resize(desk.generators.size());
        for (std::size_t g = 0; g < desk.generators.size(); ++g) {
            const auto& gen = desk.generators[g];
            prev.p[g] = rng.uniform(gen.p_min, gen.p_max);
        }
        Realization r;
        for (const auto& z : desk.zones) {
            r.zonal_load[z] = rng.uniform(1200.0, 4200.0);
            r.zonal_wind[z] = rng.uniform(0.0, 220.0);
            r.zonal_solar[z] = rng.uniform(0.0, 420.0);
        }
        const ScedProblem sp = build_sced(desk, commitment, prev, r);
        const LpSolution sol = solve(sp.lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        const QoiSample oracle = recompute_qois(sp, sol.primal, desk);

        const auto res = solve_sced(desk, commitment, prev, r, nullptr);
        CHECK(res.qoi.cost == doctest::Approx(oracle.cost).epsilon(1e-6));
        CHECK(std::fabs(res.qoi.load_shed - oracle.load_shed) < 1e-6);
        CHECK(std::fabs(res.qoi.reg_reserve - oracle.reg_reserve) < 1e-6);
        CHECK(std::fabs(res.qoi.op_reserve - oracle.op_reserve) < 1e-6);
    }
}

TEST_CASE("energy balance and export closure hold at every sampled step") {
    const SystemModel desk = build_desk_system();
    Rng rng(77);
    const std::vector<bool> commitment(desk.generators.size(), true);
    for (int rep = 0; rep < 10; ++rep) {
        DispatchState prev;
        prev.p.resize(desk.generators.size());
        for (std::size_t g = 0; g < desk.generators.size(); ++g)
            prev.p[g] = desk.generators[g].p_min;
        Realization r;
        double total_load = 0.0, total_ren = 0.0;
        for (const auto& z : desk.zones) {
            r.zonal_load[z] = rng.uniform(1500.0, 4500.0);
            r.zonal_wind[z] = rng.uniform(0.0, 200.0);
            r.zonal_solar[z] = rng.uniform(0.0, 300.0);
            total_load += r.zonal_load[z];
            total_ren += r.zonal_wind[z] + r.zonal_solar[z];
        }
        const ScedProblem sp = build_sced(desk, commitment, prev, r);
        const LpSolution sol = solve(sp.lp);
        REQUIRE(sol.status == LpStatus::Optimal);

        double p_sum = 0.0, shed = 0.0, curtail = 0.0, exports = 0.0;
        for (std::size_t g = 0; g < desk.generators.size(); ++g)
            if (sp.layout.p_col[g] >= 0) p_sum += sol.primal[sp.layout.p_col[g]];
        for (std::size_t z = 0; z < desk.zones.size(); ++z) {
            shed += sol.primal[sp.layout.shed_col[z]];
            curtail += sol.primal[sp.layout.curtail_col[z]];
            exports += sol.primal[sp.layout.export_col[z]];
        }
        CHECK(std::fabs(p_sum + total_ren - curtail + shed - total_load) < 1e-6);
        CHECK(std::fabs(exports) < 1e-6);
    }
}

TEST_CASE("cost is nondecreasing in total load") {
    const SystemModel desk = build_desk_system();
    const std::vector<bool> commitment(desk.generators.size(), true);
    DispatchState prev;
    prev.p.resize(desk.generators.size());
    for (std::size_t g = 0; g < desk.generators.size(); ++g)
        prev.p[g] = desk.generators[g].p_min;
    double last_cost = -1.0;
    for (double scale = 0.5; scale < 1.65; scale += 0.1) {
        Realization r;
        for (const auto& z : desk.zones) {
            r.zonal_load[z] = 3000.0 * scale;
            r.zonal_wind[z] = 100.0;
            r.zonal_solar[z] = 50.0;
        }
        const auto res = solve_sced(desk, commitment, prev, r, nullptr);
        CHECK(res.qoi.cost >= last_cost - 1e-6);
        last_cost = res.qoi.cost;
    }
}

TEST_CASE("a constant feasible chain is a fixed point") {
    const SystemModel s = one_gen_system(10.0, 100.0, 15.0, 10.0);
    CommitmentSchedule schedule;
    schedule.on_status.assign(24, {true});
    const Trajectory traj(kStepsPerDay, flat(60.0));
    DispatchState y0{{60.0}};
    const auto qois = simulate_day(s, schedule, y0, traj);
    REQUIRE(qois.size() == kStepsPerDay);
    for (const auto& q : qois) {
        CHECK(q.cost == doctest::Approx(qois[0].cost));
        CHECK(q.load_shed == doctest::Approx(0.0));
    }
}

TEST_CASE("step change beyond ramp sheds exactly during the deficit steps") {
    // Hand-computed: p starts at 40 and can climb 10 MW per step; load
    // jumps to 100 at step 6, so shed = 50,40,...,10 over steps 6..10.
    const SystemModel s = one_gen_system(0.0, 200.0, 10.0, 10.0);
    CommitmentSchedule schedule;
    schedule.on_status.assign(24, {true});
    Trajectory traj(24, flat(40.0));
    for (std::size_t t = 6; t < traj.size(); ++t) traj[t] = flat(100.0);
    const auto qois =
        simulate_span(s, schedule, DispatchState{{40.0}}, traj, 0, nullptr);
    for (std::size_t t = 0; t < 6; ++t) CHECK(qois[t].load_shed == doctest::Approx(0.0));
    const double expected[] = {50.0, 40.0, 30.0, 20.0, 10.0};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(qois[6 + i].load_shed == doctest::Approx(expected[i]).epsilon(1e-9));
    for (std::size_t t = 11; t < qois.size(); ++t)
        CHECK(qois[t].load_shed == doctest::Approx(0.0));
}

TEST_CASE("repeat simulation of the same scenario is bit-identical") {
    const SystemModel desk = build_desk_system();
    RunConfig cfg;
    cfg.base_days = 2;
    cfg.seed = 11;
    const std::vector<Trajectory> days = synth_base_days(desk, cfg);
    const CommitmentSchedule schedule = build_desk_schedule(desk, days, cfg);
    const DispatchState y0 = initial_dispatch(desk, schedule);
    const auto a = simulate_day(desk, schedule, y0, days[0]);
    const auto b = simulate_day(desk, schedule, y0, days[0]);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].cost == b[t].cost);
        CHECK(a[t].load_shed == b[t].load_shed);
        CHECK(a[t].reg_reserve == b[t].reg_reserve);
        CHECK(a[t].op_reserve == b[t].op_reserve);
    }
}

TEST_CASE("hour transitions enter at p_min and drop de-committed units to zero") {
    SystemModel s = one_gen_system(20.0, 100.0, 15.0, 10.0);
    s.generators.push_back(Generator{"h", "z", 30.0, 100.0, 15.0, 20.0, true});
    CommitmentSchedule schedule;
    schedule.on_status.assign(24, {true, false});
    schedule.on_status[1] = {false, true};  // swap units at hour 1

    Trajectory traj(2 * kStepsPerHour, flat(60.0));
    std::vector<DispatchState> dispatches;
    simulate_span(s, schedule, DispatchState{{60.0, 0.0}}, traj, 0, &dispatches);

    const DispatchState& first_of_hour1 = dispatches[kStepsPerHour];
    CHECK(first_of_hour1.p[0] == 0.0);  // de-committed
    // The entrant starts from p_min = 30 and may ramp at most 15 in its
    // first interval.
    CHECK(first_of_hour1.p[1] <= 45.0 + 1e-9);
    CHECK(first_of_hour1.p[1] >= 30.0 - 1e-9);
}

TEST_CASE("absurd load still solves via shed (never infeasible)") {
    const SystemModel s = one_gen_system(0.0, 100.0, 100.0, 10.0, 50.0, 80.0);
    const auto r = solve_sced(s, {true}, DispatchState{{0.0}}, flat(1e5), nullptr);
    CHECK(r.qoi.load_shed > 0.0);
}

TEST_CASE("uncommitted generators with nonzero previous output are rejected") {
    const SystemModel s = one_gen_system(0.0, 100.0, 10.0, 10.0);
    CHECK_THROWS_AS(
        validate_dispatch(DispatchState{{5.0}}, s, std::vector<bool>{false}),
        std::runtime_error);
}
