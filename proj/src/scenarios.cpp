#include "gridrisk/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "gridrisk/rng.hpp"
#include "json.hpp"

namespace gridrisk {

namespace fs = std::filesystem;
using nlohmann::json;

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::DA: return "DA";
        case Provenance::ST: return "ST";
        case Provenance::Augmented: return "Augmented";
    }
    return "?";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "DA") return Provenance::DA;
    if (name == "ST") return Provenance::ST;
    if (name == "Augmented") return Provenance::Augmented;
    throw std::runtime_error("unknown provenance: " + name);
}

void validate_scenario_set(const ScenarioSet& set) {
    if (set.scenarios.empty()) throw std::runtime_error("scenario set is empty");
    if (set.weights.size() != set.scenarios.size())
        throw std::runtime_error("scenario weights size mismatch");
    const std::size_t len = set.scenarios.front().size();
    double sum = 0.0;
    for (double w : set.weights) {
        if (w < 0.0) throw std::runtime_error("negative scenario weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::runtime_error("scenario weights do not sum to 1");
    for (const auto& traj : set.scenarios)
        if (traj.size() != len)
            throw std::runtime_error("scenario trajectories differ in length");
}

ScenarioSet dirichlet_mix(const std::vector<Trajectory>& base, std::size_t n, double alpha,
                          std::uint64_t seed) {
    if (base.size() < 2) throw std::runtime_error("dirichlet_mix needs at least 2 base days");
    if (n < 1) throw std::runtime_error("dirichlet_mix needs n >= 1");
    if (alpha <= 0.0) throw std::runtime_error("dirichlet_mix needs alpha > 0");
    const std::size_t len = base.front().size();
    for (const auto& traj : base)
        if (traj.size() != len)
            throw std::runtime_error("base trajectories differ in length");

    ScenarioSet set;
    set.provenance = Provenance::DA;
    set.seed = seed;
    set.scenarios.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> w = rng.dirichlet(base.size(), alpha);
        Trajectory mix(len);
        for (std::size_t t = 0; t < len; ++t) {
            Realization& r = mix[t];
            for (const auto& [zone, v] : base.front()[t].zonal_load) {
                (void)v;
                double load = 0.0, wind = 0.0, solar = 0.0;
                for (std::size_t k = 0; k < base.size(); ++k) {
                    load += w[k] * base[k][t].zonal_load.at(zone);
                    wind += w[k] * base[k][t].zonal_wind.at(zone);
                    solar += w[k] * base[k][t].zonal_solar.at(zone);
                }
                r.zonal_load[zone] = load;
                r.zonal_wind[zone] = wind;
                r.zonal_solar[zone] = solar;
            }
        }
        set.scenarios.push_back(std::move(mix));
    }
    set.weights.assign(n, 1.0 / static_cast<double>(n));
    return set;
}

ScenarioSet gbm_short_term(const Trajectory& actual, std::size_t n, double rel_sigma_1h,
                           std::uint64_t seed) {
    if (actual.size() != kStepsPerHour)
        throw std::runtime_error("gbm_short_term expects a 12-step trajectory");
    if (rel_sigma_1h < 0.0 || rel_sigma_1h >= 0.5)
        throw std::runtime_error("rel_sigma_1h must be in [0, 0.5)");
    const double sigma_step = rel_sigma_1h / std::sqrt(static_cast<double>(kStepsPerHour));

    ScenarioSet set;
    set.provenance = Provenance::ST;
    set.seed = seed;
    set.scenarios.assign(n, actual);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        Trajectory& traj = set.scenarios[i];
        // One independent multiplier path per channel; iteration order is
        // fixed (zones in map order; load, wind, solar) so the stream is
        // reproducible.
        auto perturb = [&](auto member) {
            for (const auto& [zone, v0] : (actual.front().*member)) {
                (void)v0;
                double m = 1.0;
                for (std::size_t t = 0; t < kStepsPerHour; ++t) {
                    const double eps = rng.normal();
                    m *= std::exp(sigma_step * eps - 0.5 * sigma_step * sigma_step);
                    double& out = (traj[t].*member)[zone];
                    out = std::max(0.0, out * m);
                }
            }
        };
        perturb(&Realization::zonal_load);
        perturb(&Realization::zonal_wind);
        perturb(&Realization::zonal_solar);
    }
    set.weights.assign(n, 1.0 / static_cast<double>(n));
    return set;
}

ScenarioSet augment_unsafe(const SystemModel& system, const CommitmentSchedule& schedule,
                           const ScenarioSet& base, const std::vector<double>& stress_factors,
                           std::uint64_t seed) {
    (void)schedule;
    validate_scenario_set(base);
    for (double f : stress_factors)
        if (f < 0.0) throw std::runtime_error("stress factors must be >= 0");

    ScenarioSet out;
    out.provenance = Provenance::Augmented;
    out.seed = seed;
    for (const auto& traj : base.scenarios) {
        for (double f : stress_factors) {
            Trajectory stressed = traj;
            const double up = 1.0 + f;
            const double down = 1.0 / (1.0 + f);
            for (auto& r : stressed) {
                for (auto& [zone, v] : r.zonal_load) v *= up;
                for (auto& [zone, v] : r.zonal_wind) v *= down;
                for (auto& [zone, v] : r.zonal_solar) v *= down;
            }
            // Sanity: stressed loads must still be valid realizations.
            for (auto& r : stressed) validate_realization(r, system);
            out.scenarios.push_back(std::move(stressed));
        }
    }
    out.weights.assign(out.scenarios.size(), 1.0 / static_cast<double>(out.scenarios.size()));
    return out;
}

void save_scenario_set(const ScenarioSet& set, const std::string& dir) {
    fs::create_directories(dir);
    json meta;
    meta["provenance"] = provenance_name(set.provenance);
    meta["seed"] = set.seed;
    meta["weights"] = set.weights;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < set.scenarios.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "scenario_%05zu.csv", i);
        files.emplace_back(name);
        save_trajectory_csv(set.scenarios[i], (fs::path(dir) / name).string());
    }
    meta["files"] = files;
    std::ofstream out(fs::path(dir) / "meta.json");
    if (!out) throw std::runtime_error("cannot write scenario metadata in " + dir);
    out << meta.dump(2) << '\n';
}

ScenarioSet load_scenario_set(const std::string& dir, const SystemModel& system) {
    std::ifstream in(fs::path(dir) / "meta.json");
    if (!in) throw std::runtime_error("missing scenario metadata: " + dir + "/meta.json");
    json meta;
    in >> meta;
    ScenarioSet set;
    set.provenance = provenance_from_name(meta.at("provenance").get<std::string>());
    set.seed = meta.at("seed").get<std::uint64_t>();
    set.weights = meta.at("weights").get<std::vector<double>>();
    for (const auto& f : meta.at("files")) {
        set.scenarios.push_back(
            load_trajectory_csv((fs::path(dir) / f.get<std::string>()).string(), system));
    }
    validate_scenario_set(set);
    return set;
}

}  // namespace gridrisk
