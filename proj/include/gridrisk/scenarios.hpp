#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridrisk/grid_model.hpp"

namespace gridrisk {

enum class Provenance : std::uint8_t { DA, ST, Augmented };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

// A set of equal-length Monte-Carlo trajectories with probability
// weights. Immutable after generation.
struct ScenarioSet {
    std::vector<Trajectory> scenarios;
    std::vector<double> weights;  // >= 0, sums to 1
    Provenance provenance = Provenance::DA;
    std::uint64_t seed = 0;
};

void validate_scenario_set(const ScenarioSet& set);

// Convex combinations of the base trajectories with Dirichlet(alpha)
// weights, the day-ahead scenario generator.
ScenarioSet dirichlet_mix(const std::vector<Trajectory>& base, std::size_t n, double alpha,
                          std::uint64_t seed);

// Multiplicative geometric Brownian noise around a one-hour actual
// trajectory; the short-term scenario generator. rel_sigma_1h is the
// relative standard deviation accumulated over the full hour.
ScenarioSet gbm_short_term(const Trajectory& actual, std::size_t n, double rel_sigma_1h,
                           std::uint64_t seed);

// Stressed copies for surrogate training only: load scaled by (1+f),
// wind and solar by 1/(1+f). Never valid for risk estimation.
ScenarioSet augment_unsafe(const SystemModel& system, const CommitmentSchedule& schedule,
                           const ScenarioSet& base, const std::vector<double>& stress_factors,
                           std::uint64_t seed);

// Directory layout: meta.json {provenance, seed, weights, files} plus one
// time-series CSV per scenario.
void save_scenario_set(const ScenarioSet& set, const std::string& dir);
ScenarioSet load_scenario_set(const std::string& dir, const SystemModel& system);

}  // namespace gridrisk
