#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gridrisk/grid_model.hpp"
#include "gridrisk/pipeline.hpp"
#include "gridrisk/rng.hpp"

using namespace gridrisk;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const char* name) {
    return (fs::temp_directory_path() / name).string();
}

SystemModel two_gen_system(double cost_a, double cost_b, double pmax = 100.0) {
    SystemModel s;
    s.zones = {"z"};
    s.zonal_export_limit = {{"z", 0.0}};
    s.mrr_reg = 0.0;
    s.mrr_op = 0.0;
    Generator a{"a", "z", 0.0, pmax, 10.0, cost_a, true};
    Generator b{"b", "z", 0.0, pmax, 10.0, cost_b, true};
    s.generators = {a, b};
    return s;
}

}  // namespace

TEST_CASE("minimal one-zone one-generator file loads") {
    const std::string path = temp_path("minimal_system.json");
    std::ofstream(path) << R"({
        "zones": ["z1"],
        "generators": [{"id": "g1", "zone": "z1", "p_min": 10, "p_max": 50,
                        "ramp_rate": 5, "energy_cost": 20, "reg_capable": true}],
        "export_limits": {"z1": 0},
        "mrr_reg": 0, "mrr_op": 0, "voll": 3500, "reserve_penalty": 1000})";
    const SystemModel s = load_system(path);
    CHECK(s.generators.size() == 1);
    CHECK(s.generators[0].id == "g1");
    CHECK(s.effective_reg_penalty() == 1000.0);
}

TEST_CASE("crossed generator limits are rejected with the generator id") {
    const std::string path = temp_path("bad_system.json");
    std::ofstream(path) << R"({
        "zones": ["z1"],
        "generators": [{"id": "gbad", "zone": "z1", "p_min": 60, "p_max": 50,
                        "ramp_rate": 5, "energy_cost": 20, "reg_capable": true}],
        "export_limits": {"z1": 0},
        "mrr_reg": 0, "mrr_op": 0, "voll": 3500, "reserve_penalty": 1000})";
    CHECK_THROWS_WITH_AS(load_system(path), doctest::Contains("gbad"), std::runtime_error);
}

TEST_CASE("malformed JSON is a parse error") {
    const std::string path = temp_path("broken_system.json");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_WITH_AS(load_system(path), doctest::Contains("malformed"),
                         std::runtime_error);
}

TEST_CASE("desk fixture has 3 zones and 20 generators and round-trips") {
    const SystemModel desk = build_desk_system();
    CHECK(desk.zones.size() == 3);
    CHECK(desk.generators.size() == 20);

    const std::string path = temp_path("desk_roundtrip.json");
    save_system(desk, path);
    const SystemModel loaded = load_system(path);
    REQUIRE(loaded.generators.size() == desk.generators.size());
    CHECK(loaded.zones == desk.zones);
    CHECK(loaded.zonal_export_limit == desk.zonal_export_limit);
    CHECK(loaded.mrr_reg == desk.mrr_reg);
    CHECK(loaded.mrr_op == desk.mrr_op);
    CHECK(loaded.voll == desk.voll);
    CHECK(loaded.reserve_penalty == desk.reserve_penalty);
    CHECK(loaded.reg_penalty == desk.reg_penalty);
    for (std::size_t g = 0; g < desk.generators.size(); ++g) {
        CHECK(loaded.generators[g].id == desk.generators[g].id);
        CHECK(loaded.generators[g].zone == desk.generators[g].zone);
        CHECK(loaded.generators[g].p_min == desk.generators[g].p_min);
        CHECK(loaded.generators[g].p_max == desk.generators[g].p_max);
        CHECK(loaded.generators[g].ramp_rate == desk.generators[g].ramp_rate);
        CHECK(loaded.generators[g].energy_cost == desk.generators[g].energy_cost);
        CHECK(loaded.generators[g].reg_capable == desk.generators[g].reg_capable);
    }
}

TEST_CASE("priority list commits cheap units first") {
    const SystemModel s = two_gen_system(10.0, 20.0);
    std::vector<double> peak(24, 90.0);

    SUBCASE("low peak commits only the cheap unit") {
        const CommitmentSchedule c = priority_list_commitment(s, peak, 0.0);
        for (std::size_t h = 0; h < 24; ++h) {
            CHECK(c.on_status[h][0]);
            CHECK_FALSE(c.on_status[h][1]);
        }
    }
    SUBCASE("higher peak brings in both") {
        std::fill(peak.begin(), peak.end(), 150.0);
        const CommitmentSchedule c = priority_list_commitment(s, peak, 0.0);
        CHECK(c.on_status[0][0]);
        CHECK(c.on_status[0][1]);
    }
    SUBCASE("unreachable target saturates at full commitment") {
        std::fill(peak.begin(), peak.end(), 500.0);
        const CommitmentSchedule c = priority_list_commitment(s, peak, 0.1);
        CHECK(c.on_status[0][0]);
        CHECK(c.on_status[0][1]);
    }
}

TEST_CASE("priority list is monotone in peak load") {
    const SystemModel desk = build_desk_system();
    Rng rng(404);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> peak(24), higher(24);
        for (std::size_t h = 0; h < 24; ++h) {
            peak[h] = rng.uniform(0.0, 14000.0);
            higher[h] = peak[h] + rng.uniform(0.0, 2000.0);
        }
        const CommitmentSchedule a = priority_list_commitment(desk, peak, 0.05);
        const CommitmentSchedule b = priority_list_commitment(desk, higher, 0.05);
        for (std::size_t h = 0; h < 24; ++h)
            for (std::size_t g = 0; g < desk.generators.size(); ++g)
                if (a.on_status[h][g]) CHECK(b.on_status[h][g]);
    }
}

TEST_CASE("feature vector layout and purity") {
    SystemModel s = two_gen_system(10.0, 20.0);

    SUBCASE("single zone duplicates the totals") {
        Realization r{{{"z", 100.0}}, {{"z", 10.0}}, {{"z", 5.0}}};
        const std::vector<double> f = features_of(r, s);
        CHECK(f == std::vector<double>{100.0, 10.0, 5.0, 100.0, 10.0, 5.0});
        CHECK(features_of(r, s) == f);  // bit-identical on repeat
    }
    SUBCASE("two zones in declared order") {
        SystemModel s2 = s;
        s2.zones = {"a", "b"};
        s2.zonal_export_limit = {{"a", 0.0}, {"b", 0.0}};
        s2.generators[0].zone = "a";
        s2.generators[1].zone = "b";
        Realization r{{{"a", 60.0}, {"b", 40.0}},
                      {{"a", 0.0}, {"b", 0.0}},
                      {{"a", 0.0}, {"b", 0.0}}};
        CHECK(features_of(r, s2) ==
              std::vector<double>{100.0, 0.0, 0.0, 60.0, 40.0, 0.0, 0.0, 0.0, 0.0});
        CHECK(feature_names(s2).size() == feature_count(s2));
    }
    SUBCASE("all-zero realization maps to the zero vector") {
        Realization r{{{"z", 0.0}}, {{"z", 0.0}}, {{"z", 0.0}}};
        const std::vector<double> f = features_of(r, s);
        CHECK(f.size() == feature_count(s));
        for (double v : f) CHECK(v == 0.0);
    }
}

TEST_CASE("trajectory CSV round-trips field for field") {
    const SystemModel desk = build_desk_system();
    RunConfig cfg;
    cfg.base_days = 2;
    cfg.seed = 7;
    const std::vector<Trajectory> days = synth_base_days(desk, cfg);
    const std::string path = temp_path("traj_roundtrip.csv");
    save_trajectory_csv(days[0], path);
    const Trajectory back = load_trajectory_csv(path, desk);
    REQUIRE(back.size() == days[0].size());
    for (std::size_t t = 0; t < back.size(); ++t) {
        for (const auto& z : desk.zones) {
            CHECK(back[t].zonal_load.at(z) ==
                  doctest::Approx(days[0][t].zonal_load.at(z)).epsilon(1e-12));
            CHECK(back[t].zonal_wind.at(z) ==
                  doctest::Approx(days[0][t].zonal_wind.at(z)).epsilon(1e-12));
            CHECK(back[t].zonal_solar.at(z) ==
                  doctest::Approx(days[0][t].zonal_solar.at(z)).epsilon(1e-12));
        }
    }
}

TEST_CASE("schedule validation enforces 24 rows and matching width") {
    const SystemModel s = two_gen_system(10.0, 20.0);
    CommitmentSchedule c;
    c.on_status.assign(23, std::vector<bool>(2, true));
    CHECK_THROWS_AS(validate_schedule(c, s), std::runtime_error);
    c.on_status.assign(24, std::vector<bool>(3, true));
    CHECK_THROWS_AS(validate_schedule(c, s), std::runtime_error);
}
