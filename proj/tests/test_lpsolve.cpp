#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gridrisk/lpsolve.hpp"
#include "support/lp_vertex_oracle.hpp"

using namespace gridrisk;

namespace {

LpProblem one_var(double c, double row_rhs, RowSense sense, double lo, double hi) {
    LpProblem p;
    p.objective = {c};
    p.matrix = {1.0};
    p.senses = {sense};
    p.rhs = {row_rhs};
    p.lower = {lo};
    p.upper = {hi};
    return p;
}

}  // namespace

TEST_CASE("minimal bounded LP solves to the binding constraint") {
    const LpSolution s = solve(one_var(1.0, 1.0, RowSense::GreaterEqual, 0.0, 10.0));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.primal[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.objective_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constraint beyond the variable's range is infeasible") {
    const LpSolution s = solve(one_var(1.0, 5.0, RowSense::GreaterEqual, 0.0, 2.0));
    CHECK(s.status == LpStatus::Infeasible);
}

TEST_CASE("free descent direction is reported unbounded") {
    LpProblem p;
    p.objective = {-1.0};
    p.lower = {0.0};
    p.upper = {kInf};
    const LpSolution s = solve(p);
    CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("free variable settles on the row bound") {
    const LpSolution s = solve(one_var(1.0, -5.0, RowSense::GreaterEqual, -kInf, kInf));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.primal[0] == doctest::Approx(-5.0));
}

TEST_CASE("dimension mismatches are rejected before solving") {
    LpProblem p = one_var(1.0, 1.0, RowSense::GreaterEqual, 0.0, 10.0);
    p.matrix.push_back(2.0);
    CHECK_THROWS_AS(solve(p), std::invalid_argument);
    LpProblem q = one_var(1.0, 1.0, RowSense::GreaterEqual, 3.0, 2.0);
    CHECK_THROWS_AS(solve(q), std::invalid_argument);
}

TEST_CASE("100 random LPs match the vertex-enumeration oracle") {
    int optimal_seen = 0, infeasible_seen = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const LpProblem p = testing::random_boxed_lp(seed);
        const auto oracle = testing::enumerate_vertices(p);
        const LpSolution s = solve(p);
        INFO("seed ", seed);
        if (oracle.feasible) {
            ++optimal_seen;
            REQUIRE(s.status == LpStatus::Optimal);
            CHECK(s.objective_value == doctest::Approx(oracle.objective).epsilon(1e-8));
        } else {
            ++infeasible_seen;
            REQUIRE(s.status == LpStatus::Infeasible);
        }
    }
    // The generator must exercise both classifications.
    CHECK(optimal_seen > 50);
    CHECK(infeasible_seen > 5);
}

TEST_CASE("determinism: identical bytes in, identical vertex out") {
    const LpProblem p = testing::random_boxed_lp(7);
    const LpSolution a = solve(p);
    const LpSolution b = solve(p);
    REQUIRE(a.status == b.status);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.primal == b.primal);
}

TEST_CASE("weak duality holds for the constructed dual") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const LpProblem p = testing::random_boxed_lp(seed * 31 + 5);
        const LpSolution s = solve(p);
        if (s.status != LpStatus::Optimal) continue;
        // Dual objective: y'b plus the bound terms picked up by the
        // reduced costs of nonbasic variables.
        double dual = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) dual += s.duals[i] * p.rhs[i];
        for (std::size_t j = 0; j < p.cols(); ++j) {
            const double d = s.reduced_costs[j];
            if (d > 0.0)
                dual += d * p.lower[j];
            else
                dual += d * p.upper[j];
        }
        INFO("seed ", seed * 31 + 5);
        CHECK(dual <= s.objective_value + 1e-6);
    }
}

TEST_CASE("warm start from own basis converges immediately") {
    const LpProblem p = testing::random_boxed_lp(11);
    const LpSolution cold = solve(p);
    REQUIRE(cold.status == LpStatus::Optimal);
    const LpSolution warm = warm_hint(p, cold.basis);
    REQUIRE(warm.status == LpStatus::Optimal);
    CHECK(warm.objective_value == doctest::Approx(cold.objective_value).epsilon(1e-10));
    CHECK(warm.iterations <= 1);
}

TEST_CASE("warm start after a small rhs perturbation matches a cold solve") {
    for (std::uint64_t seed : {3ULL, 11ULL, 19ULL, 42ULL}) {
        LpProblem p = testing::random_boxed_lp(seed);
        if (p.rows() == 0) continue;
        const LpSolution cold0 = solve(p);
        if (cold0.status != LpStatus::Optimal) continue;
        for (auto& b : p.rhs) b += 1e-3;
        const LpSolution cold1 = solve(p);
        const LpSolution warm1 = warm_hint(p, cold0.basis);
        REQUIRE(warm1.status == cold1.status);
        if (cold1.status == LpStatus::Optimal)
            CHECK(warm1.objective_value ==
                  doctest::Approx(cold1.objective_value).epsilon(1e-8));
    }
}

TEST_CASE("incompatible warm hints silently fall back to a cold start") {
    const LpProblem p = testing::random_boxed_lp(23);
    const LpSolution cold = solve(p);
    REQUIRE(cold.status == LpStatus::Optimal);

    LpBasis wrong;
    wrong.status.assign(3, VarStatus::AtLower);  // wrong dimensions
    wrong.basic = {0};
    const LpSolution warm = warm_hint(p, wrong);
    REQUIRE(warm.status == LpStatus::Optimal);
    CHECK(warm.objective_value == doctest::Approx(cold.objective_value).epsilon(1e-10));
}

TEST_CASE("degenerate pivoting terminates (stall engages Bland's rule)") {
    // Beale's classic cycling example for most-negative-cost pivoting.
    LpProblem p;
    p.objective = {-0.75, 150.0, -0.02, 6.0};
    p.matrix = {
        0.25, -60.0, -1.0 / 25.0, 9.0,  //
        0.5,  -90.0, -1.0 / 50.0, 3.0,  //
        0.0,  0.0,   1.0,         0.0,
    };
    p.senses = {RowSense::LessEqual, RowSense::LessEqual, RowSense::LessEqual};
    p.rhs = {0.0, 0.0, 1.0};
    p.lower = {0.0, 0.0, 0.0, 0.0};
    p.upper = {kInf, kInf, kInf, kInf};
    const LpSolution s = solve(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("problem dump has the fixed golden layout") {
    const LpProblem p = one_var(2.0, 1.0, RowSense::GreaterEqual, 0.0, 10.0);
    CHECK(dump_problem(p) ==
          "minimize\n  2\nsubject to\n  r0: 1 >= 1\nbounds\n  x0 in [0, 10]\n");
}
