#include <array>
#include <cmath>
#include <stdexcept>

#include "gridrisk/pipeline.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

namespace {

struct GenSpec {
    const char* id;
    const char* zone;
    double p_max;
    double p_min_frac;
    double ramp;
    double cost;
    bool reg;
};

// 20 units, ~13.3 GW, constant marginal costs spanning base load to
// peakers. Regulating capability skewed toward the flexible units.
constexpr GenSpec kDeskFleet[] = {
    {"N1", "north", 1300.0, 0.36, 95.0, 12.5, true},
    {"N2", "north", 1200.0, 0.36, 90.0, 14.0, true},
    {"N3", "north", 750.0, 0.26, 55.0, 30.0, true},
    {"N4", "north", 620.0, 0.22, 48.0, 37.5, false},
    {"N5", "north", 420.0, 0.18, 50.0, 52.0, true},
    {"N6", "north", 380.0, 0.12, 75.0, 74.0, true},
    {"N7", "north", 320.0, 0.10, 80.0, 95.0, true},
    {"C1", "center", 1250.0, 0.36, 92.0, 13.2, true},
    {"C2", "center", 1050.0, 0.34, 80.0, 18.5, true},
    {"C3", "center", 700.0, 0.26, 52.0, 33.0, true},
    {"C4", "center", 580.0, 0.22, 46.0, 41.0, false},
    {"C5", "center", 360.0, 0.16, 48.0, 58.0, true},
    {"C6", "center", 340.0, 0.12, 70.0, 88.0, true},
    {"S1", "south", 1100.0, 0.35, 85.0, 15.8, true},
    {"S2", "south", 850.0, 0.32, 70.0, 22.0, true},
    {"S3", "south", 620.0, 0.24, 50.0, 35.5, false},
    {"S4", "south", 500.0, 0.20, 45.0, 47.0, true},
    {"S5", "south", 380.0, 0.15, 65.0, 66.0, true},
    {"S6", "south", 310.0, 0.12, 68.0, 82.0, true},
    {"S7", "south", 260.0, 0.10, 60.0, 110.0, true},
};

constexpr double kZoneShare[3] = {0.42, 0.33, 0.25};
constexpr double kWindCapFrac = 0.05;   // of zone mean load
constexpr double kSolarCapFrac = 0.10;  // of zone mean load

double bump(double h, double center, double width) {
    const double d = (h - center) / width;
    return std::exp(-d * d);
}

// Diurnal load shape: quiet night, morning and evening peaks.
double load_shape(double h) {
    return 0.76 + 0.165 * bump(h, 8.0, 2.0) + 0.24 * bump(h, 18.7, 2.1);
}

double solar_shape(double h) {
    if (h < 6.2 || h > 20.2) return 0.0;
    return std::sin(M_PI * (h - 6.2) / 14.0);
}

}  // namespace

SystemModel build_desk_system() {
    SystemModel system;
    system.zones = {"north", "center", "south"};
    for (const auto& spec : kDeskFleet) {
        Generator g;
        g.id = spec.id;
        g.zone = spec.zone;
        g.p_max = spec.p_max;
        g.p_min = std::round(spec.p_min_frac * spec.p_max);
        g.ramp_rate = spec.ramp;
        g.energy_cost = spec.cost;
        g.reg_capable = spec.reg;
        system.generators.push_back(std::move(g));
    }
    // Generous caps: inter-zonal exchange is not the stressor here.
    system.zonal_export_limit = {{"north", 2600.0}, {"center", 2200.0}, {"south", 1800.0}};
    system.mrr_reg = 500.0;
    system.mrr_op = 2250.0;
    system.voll = 3500.0;
    system.reserve_penalty = 1000.0;
    system.reg_penalty = 4200.0;  // regulation outranks energy
    validate_system(system);
    return system;
}

std::vector<Trajectory> synth_base_days(const SystemModel& system, const RunConfig& config) {
    const std::size_t k_days = config.base_days;
    if (k_days < 2) throw std::runtime_error("need at least 2 base days");
    const std::size_t nz = system.zones.size();

    std::vector<Trajectory> days;
    days.reserve(k_days);
    for (std::size_t day = 0; day < k_days; ++day) {
        Rng rng(derive_seed(config.seed, 1000 + day));
        // Deterministic net-load ladder across days, plus mild noise.
        const double scale =
            config.day_scale_low +
            (config.day_scale_high - config.day_scale_low) *
                (static_cast<double>(day) / static_cast<double>(k_days - 1)) +
            0.01 * (rng.uniform01() - 0.5);
        const double clear = 0.55 + 0.45 * rng.uniform01();  // solar clearness
        const double wind_level = 0.25 + 0.3 * rng.uniform01();
        const double wind_phase = 24.0 * rng.uniform01();

        // Low-frequency load wiggle, shared across zones.
        double amp[3], freq[3] = {2.0, 3.0, 5.0}, phase[3];
        for (int j = 0; j < 3; ++j) {
            amp[j] = 0.004 + 0.008 * rng.uniform01();
            phase[j] = 2.0 * M_PI * rng.uniform01();
        }

        Trajectory traj(kStepsPerDay);
        for (std::size_t t = 0; t < kStepsPerDay; ++t) {
            const double h = static_cast<double>(t) / 12.0;
            double wiggle = 0.0;
            for (int j = 0; j < 3; ++j)
                wiggle += amp[j] * std::sin(2.0 * M_PI * freq[j] * h / 24.0 + phase[j]);
            const double shape = load_shape(h) * (1.0 + wiggle);
            for (std::size_t z = 0; z < nz; ++z) {
                const double zone_mean = config.mean_load * kZoneShare[z];
                const double load = zone_mean * scale * shape;
                const double wind =
                    zone_mean * kWindCapFrac *
                    std::max(0.0, wind_level + 0.35 * std::sin(2.0 * M_PI * (h + wind_phase) / 24.0));
                const double solar = zone_mean * kSolarCapFrac * clear * solar_shape(h);
                const auto& zone = system.zones[z];
                traj[t].zonal_load[zone] = load;
                traj[t].zonal_wind[zone] = wind;
                traj[t].zonal_solar[zone] = solar;
            }
        }
        days.push_back(std::move(traj));
    }
    return days;
}

CommitmentSchedule build_desk_schedule(const SystemModel& system,
                                       const std::vector<Trajectory>& base_days,
                                       const RunConfig& config) {
    // Commit against the worst base day per hour, with headroom for the
    // operating-reserve requirement; optionally under-commit the stress
    // hours to surface risk there.
    std::vector<double> target(24, 0.0);
    for (std::size_t h = 0; h < 24; ++h) {
        double worst = 0.0;
        for (const auto& day : base_days) {
            double peak = 0.0;
            for (std::size_t t = 12 * h; t < 12 * (h + 1); ++t) {
                double net = 0.0;
                for (const auto& zone : system.zones)
                    net += day[t].zonal_load.at(zone) - day[t].zonal_wind.at(zone) -
                           day[t].zonal_solar.at(zone);
                peak = std::max(peak, net);
            }
            worst = std::max(worst, peak);
        }
        target[h] = worst + system.mrr_op + config.commit_reserve_buffer;
    }
    if (config.stress) {
        std::array<double, 24> depth{};
        for (int sh : config.fixture_stress_hours)
            if (sh >= 0 && sh < 24) depth[sh] = config.stress_depth;
        // Taper the recovery after each stress block so entering units
        // (which start at p_min) never out-run the fleet's down-ramp.
        for (int sh : config.fixture_stress_hours) {
            for (std::size_t k = 0; k < config.stress_exit_taper.size(); ++k) {
                const int h = sh + 1 + static_cast<int>(k);
                if (h >= 24) break;
                depth[h] = std::max(depth[h],
                                    config.stress_depth * config.stress_exit_taper[k]);
            }
        }
        for (std::size_t h = 0; h < 24; ++h) target[h] *= 1.0 - depth[h];
    }
    return priority_list_commitment(system, target, config.commit_margin);
}

}  // namespace gridrisk
