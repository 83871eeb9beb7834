#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridrisk/dataset.hpp"
#include "gridrisk/neural_net.hpp"
#include "gridrisk/random_forest.hpp"
#include "gridrisk/risk.hpp"

namespace gridrisk {

enum class RiskCase : std::uint8_t { High, Medium, Low };
const char* risk_case_name(RiskCase c);
RiskCase risk_case_from_name(const std::string& name);

// Everything the pipeline commands need; mirrors the JSON config file.
struct RunConfig {
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    unsigned parallelism = 1;

    // Scenario counts and risk settings.
    std::size_t da_n = 2500;
    std::size_t st_n = 1000;
    std::size_t holdout_n = 30;
    double alpha = 5.0;
    double gbm_rel_sigma_1h = 0.025;
    std::size_t da_warmup_steps = 6;  // settle each DA chain onto its scenario

    // Fixture synthesis.
    std::size_t base_days = 20;
    double mean_load = 7200.0;       // MW system mean
    double day_scale_low = 0.84;     // base-day net-load ladder
    double day_scale_high = 1.16;
    bool stress = true;              // under-commit the stress hours
    double stress_depth = 0.18;
    std::vector<int> fixture_stress_hours = {6, 7, 8, 9, 17, 18, 19};
    // Fractions of stress_depth applied to the hours following each
    // stress block, so commitment recovers gradually and entering units
    // never out-run the fleet's down-ramp.
    std::vector<double> stress_exit_taper = {0.55, 0.3, 0.12};
    double commit_reserve_buffer = 600.0;  // MW above mrr_op headroom target
    double commit_margin = 0.02;

    // Unsafe-region augmentation.
    bool augment = true;
    std::size_t augment_base_count = 100;
    std::vector<double> augment_factors = {0.05, 0.10};

    // Surrogate training.
    RfParams rf;
    NnOptions nn;
    double train_fraction = 0.7;

    // Real-time assessment.
    std::vector<std::pair<int, int>> assess_windows = {{5, 11}, {16, 20}};  // [start,end) hours
    std::size_t assess_every_steps = 3;  // 15 minutes
    int timing_repeats = 5;

    // Derived locations under out_dir.
    std::string fixtures_dir() const { return out_dir + "/fixtures"; }
    std::string system_path() const { return fixtures_dir() + "/desk3z.json"; }
    std::string schedule_path() const { return fixtures_dir() + "/schedule.json"; }
    std::string base_days_dir() const { return fixtures_dir() + "/base_days"; }
    std::string da_dir() const { return out_dir + "/da"; }
    std::string models_dir() const { return out_dir + "/models"; }
    std::string rt_dir(RiskCase c) const {
        return out_dir + "/rt/case_" + risk_case_name(c);
    }
    std::string report_dir() const { return out_dir + "/report"; }
};

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

// Synthetic desk-scale fixtures (3 zones, 20 generators, diurnal base
// days) used by the whole pipeline.
SystemModel build_desk_system();
std::vector<Trajectory> synth_base_days(const SystemModel& system, const RunConfig& config);
CommitmentSchedule build_desk_schedule(const SystemModel& system,
                                       const std::vector<Trajectory>& base_days,
                                       const RunConfig& config);

// Pipeline commands. Each writes its artifacts under config.out_dir and
// is idempotent for fixed seeds.
void cmd_gen_fixtures(const RunConfig& config);
void cmd_da_assess(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_rt_assess(const RunConfig& config, RiskCase risk_case);
void cmd_report(const RunConfig& config);

}  // namespace gridrisk
