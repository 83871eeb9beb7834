#pragma once

#include <map>
#include <string>
#include <vector>

namespace gridrisk {

// Zonal copper-plate system model: generators with constant marginal
// cost, per-zone net-export caps, system-wide reserve requirements.

struct Generator {
    std::string id;
    std::string zone;
    double p_min = 0.0;       // MW
    double p_max = 0.0;       // MW
    double ramp_rate = 0.0;   // MW per 5-minute step
    double energy_cost = 0.0; // $/MWh
    bool reg_capable = false;
};

struct SystemModel {
    std::vector<Generator> generators;
    std::vector<std::string> zones;                 // fixed order, defines feature layout
    std::map<std::string, double> zonal_export_limit; // MW, per-zone net-export cap
    double mrr_reg = 500.0;        // MW, minimum regulating reserve
    double mrr_op = 2250.0;        // MW, minimum operating reserve
    double voll = 3500.0;          // $/MW
    double reserve_penalty = 1000.0; // $/MW per hour-equivalent
    // Optional steeper penalty for regulating-reserve shortfall (0 =
    // inherit reserve_penalty). Set above voll, it mimics a regulating
    // demand curve that outranks energy, keeping regulation whole even
    // through shed events.
    double reg_penalty = 0.0;

    double effective_reg_penalty() const {
        return reg_penalty > 0.0 ? reg_penalty : reserve_penalty;
    }

    std::size_t zone_index(const std::string& zone) const;
    double export_limit(const std::string& zone) const;
};

// Throws std::runtime_error naming the first violated invariant.
void validate_system(const SystemModel& system);

SystemModel load_system(const std::string& path);
void save_system(const SystemModel& system, const std::string& path);

struct CommitmentSchedule {
    // on_status[hour][generator], exactly 24 rows.
    std::vector<std::vector<bool>> on_status;
};

void validate_schedule(const CommitmentSchedule& schedule, const SystemModel& system);
CommitmentSchedule load_schedule(const std::string& path, const SystemModel& system);
void save_schedule(const CommitmentSchedule& schedule, const SystemModel& system,
                   const std::string& path);

// Commits generators in ascending energy_cost order (ties by position)
// until committed capacity covers (1 + margin) * peak load for the hour.
CommitmentSchedule priority_list_commitment(const SystemModel& system,
                                            const std::vector<double>& hourly_peak_load,
                                            double margin);

// One 5-minute realization of the uncertain inputs, all zones present.
struct Realization {
    std::map<std::string, double> zonal_load;  // MW
    std::map<std::string, double> zonal_wind;  // MW
    std::map<std::string, double> zonal_solar; // MW
};

void validate_realization(const Realization& r, const SystemModel& system);

using Trajectory = std::vector<Realization>;

inline constexpr std::size_t kStepsPerDay = 288;
inline constexpr std::size_t kStepsPerHour = 12;
inline constexpr double kHoursPerStep = 1.0 / 12.0;

// Fixed-order feature vector:
//   [total_load, total_wind, total_solar,
//    load per zone..., wind per zone..., solar per zone...]
// Zone order is the system file's zone order.
std::vector<double> features_of(const Realization& r, const SystemModel& system);

inline std::size_t feature_count(const SystemModel& system) {
    return 3 + 3 * system.zones.size();
}

// Names for the feature positions, matching features_of.
std::vector<std::string> feature_names(const SystemModel& system);

// Time-series CSV: header `step,zone,load,wind,solar`, step in 0..len-1.
Trajectory load_trajectory_csv(const std::string& path, const SystemModel& system);
void save_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace gridrisk
