#include "gridrisk/grid_model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "gridrisk/csv.hpp"
#include "json.hpp"

namespace gridrisk {

using nlohmann::json;

std::size_t SystemModel::zone_index(const std::string& zone) const {
    for (std::size_t i = 0; i < zones.size(); ++i)
        if (zones[i] == zone) return i;
    throw std::runtime_error("unknown zone: " + zone);
}

double SystemModel::export_limit(const std::string& zone) const {
    auto it = zonal_export_limit.find(zone);
    if (it == zonal_export_limit.end())
        throw std::runtime_error("no export limit for zone: " + zone);
    return it->second;
}

void validate_system(const SystemModel& system) {
    if (system.zones.empty()) throw std::runtime_error("system has no zones");
    if (system.generators.empty()) throw std::runtime_error("system has no generators");
    std::set<std::string> zone_set(system.zones.begin(), system.zones.end());
    if (zone_set.size() != system.zones.size())
        throw std::runtime_error("duplicate zone id");
    std::set<std::string> gen_ids;
    for (const auto& g : system.generators) {
        if (!gen_ids.insert(g.id).second)
            throw std::runtime_error("duplicate generator id: " + g.id);
        if (!zone_set.count(g.zone))
            throw std::runtime_error("generator " + g.id + " references unknown zone " + g.zone);
        if (g.p_min < 0.0)
            throw std::runtime_error("generator " + g.id + ": p_min < 0");
        if (g.p_min > g.p_max)
            throw std::runtime_error("generator " + g.id + ": p_min > p_max");
        if (g.ramp_rate <= 0.0)
            throw std::runtime_error("generator " + g.id + ": ramp_rate must be > 0");
    }
    for (const auto& z : system.zones) {
        auto it = system.zonal_export_limit.find(z);
        if (it == system.zonal_export_limit.end())
            throw std::runtime_error("missing export limit for zone " + z);
        if (it->second < 0.0)
            throw std::runtime_error("negative export limit for zone " + z);
    }
    if (system.mrr_reg > system.mrr_op)
        throw std::runtime_error("mrr_reg exceeds mrr_op");
    if (system.mrr_reg < 0.0) throw std::runtime_error("mrr_reg < 0");
    if (system.voll <= 0.0) throw std::runtime_error("voll must be > 0");
    if (system.reserve_penalty <= 0.0)
        throw std::runtime_error("reserve_penalty must be > 0");
    if (system.reg_penalty < 0.0)
        throw std::runtime_error("reg_penalty must be >= 0");
}

SystemModel load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open system file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed system file " + path + ": " + e.what());
    }
    SystemModel system;
    try {
        system.zones = doc.at("zones").get<std::vector<std::string>>();
        for (const auto& jg : doc.at("generators")) {
            Generator g;
            g.id = jg.at("id").get<std::string>();
            g.zone = jg.at("zone").get<std::string>();
            g.p_min = jg.at("p_min").get<double>();
            g.p_max = jg.at("p_max").get<double>();
            g.ramp_rate = jg.at("ramp_rate").get<double>();
            g.energy_cost = jg.at("energy_cost").get<double>();
            g.reg_capable = jg.at("reg_capable").get<bool>();
            system.generators.push_back(std::move(g));
        }
        for (auto it = doc.at("export_limits").begin(); it != doc.at("export_limits").end(); ++it)
            system.zonal_export_limit[it.key()] = it.value().get<double>();
        system.mrr_reg = doc.at("mrr_reg").get<double>();
        system.mrr_op = doc.at("mrr_op").get<double>();
        system.voll = doc.at("voll").get<double>();
        system.reserve_penalty = doc.at("reserve_penalty").get<double>();
        if (doc.contains("reg_penalty"))
            system.reg_penalty = doc.at("reg_penalty").get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed system file " + path + ": " + e.what());
    }
    validate_system(system);
    return system;
}

void save_system(const SystemModel& system, const std::string& path) {
    json doc;
    doc["zones"] = system.zones;
    doc["generators"] = json::array();
    for (const auto& g : system.generators) {
        doc["generators"].push_back({{"id", g.id},
                                     {"zone", g.zone},
                                     {"p_min", g.p_min},
                                     {"p_max", g.p_max},
                                     {"ramp_rate", g.ramp_rate},
                                     {"energy_cost", g.energy_cost},
                                     {"reg_capable", g.reg_capable}});
    }
    doc["export_limits"] = system.zonal_export_limit;
    doc["mrr_reg"] = system.mrr_reg;
    doc["mrr_op"] = system.mrr_op;
    doc["voll"] = system.voll;
    doc["reserve_penalty"] = system.reserve_penalty;
    if (system.reg_penalty > 0.0) doc["reg_penalty"] = system.reg_penalty;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write system file: " + path);
    out << doc.dump(2) << '\n';
}

void validate_schedule(const CommitmentSchedule& schedule, const SystemModel& system) {
    if (schedule.on_status.size() != 24)
        throw std::runtime_error("commitment schedule must have exactly 24 rows");
    for (const auto& row : schedule.on_status)
        if (row.size() != system.generators.size())
            throw std::runtime_error("commitment row size does not match generator count");
}

CommitmentSchedule load_schedule(const std::string& path, const SystemModel& system) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schedule file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed schedule file " + path + ": " + e.what());
    }
    const auto ids = doc.at("generators").get<std::vector<std::string>>();
    if (ids.size() != system.generators.size())
        throw std::runtime_error("schedule generator list does not match system");
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] != system.generators[i].id)
            throw std::runtime_error("schedule generator order mismatch at " + ids[i]);
    CommitmentSchedule schedule;
    for (const auto& row : doc.at("on_status")) {
        std::vector<bool> r;
        for (const auto& v : row) r.push_back(v.get<bool>());
        schedule.on_status.push_back(std::move(r));
    }
    validate_schedule(schedule, system);
    return schedule;
}

void save_schedule(const CommitmentSchedule& schedule, const SystemModel& system,
                   const std::string& path) {
    json doc;
    std::vector<std::string> ids;
    for (const auto& g : system.generators) ids.push_back(g.id);
    doc["generators"] = ids;
    doc["on_status"] = json::array();
    for (const auto& row : schedule.on_status) {
        json jrow = json::array();
        for (bool v : row) jrow.push_back(v);
        doc["on_status"].push_back(jrow);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schedule file: " + path);
    out << doc.dump(2) << '\n';
}

CommitmentSchedule priority_list_commitment(const SystemModel& system,
                                            const std::vector<double>& hourly_peak_load,
                                            double margin) {
    if (hourly_peak_load.size() != 24)
        throw std::runtime_error("hourly_peak_load must have 24 entries");
    if (margin < 0.0) throw std::runtime_error("margin must be >= 0");
    for (double v : hourly_peak_load)
        if (v < 0.0) throw std::runtime_error("hourly_peak_load must be >= 0");

    const std::size_t n = system.generators.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return system.generators[a].energy_cost < system.generators[b].energy_cost;
    });

    CommitmentSchedule schedule;
    schedule.on_status.assign(24, std::vector<bool>(n, false));
    for (std::size_t h = 0; h < 24; ++h) {
        const double target = (1.0 + margin) * hourly_peak_load[h];
        double committed = 0.0;
        for (std::size_t k = 0; k < n && committed < target; ++k) {
            const std::size_t g = order[k];
            schedule.on_status[h][g] = true;
            committed += system.generators[g].p_max;
        }
        // target == 0 commits nothing; a zero-load hour needs no units.
    }
    return schedule;
}

void validate_realization(const Realization& r, const SystemModel& system) {
    for (const auto& z : system.zones) {
        auto check = [&](const std::map<std::string, double>& m, const char* what) {
            auto it = m.find(z);
            if (it == m.end())
                throw std::runtime_error(std::string("realization missing ") + what +
                                         " for zone " + z);
            if (it->second < 0.0)
                throw std::runtime_error(std::string("negative ") + what + " in zone " + z);
        };
        check(r.zonal_load, "load");
        check(r.zonal_wind, "wind");
        check(r.zonal_solar, "solar");
    }
}

std::vector<double> features_of(const Realization& r, const SystemModel& system) {
    const std::size_t z = system.zones.size();
    std::vector<double> f(3 + 3 * z, 0.0);
    for (std::size_t i = 0; i < z; ++i) {
        const auto& zone = system.zones[i];
        const double load = r.zonal_load.at(zone);
        const double wind = r.zonal_wind.at(zone);
        const double solar = r.zonal_solar.at(zone);
        f[0] += load;
        f[1] += wind;
        f[2] += solar;
        f[3 + i] = load;
        f[3 + z + i] = wind;
        f[3 + 2 * z + i] = solar;
    }
    return f;
}

std::vector<std::string> feature_names(const SystemModel& system) {
    std::vector<std::string> names = {"total_load", "total_wind", "total_solar"};
    for (const auto& z : system.zones) names.push_back("load_" + z);
    for (const auto& z : system.zones) names.push_back("wind_" + z);
    for (const auto& z : system.zones) names.push_back("solar_" + z);
    return names;
}

Trajectory load_trajectory_csv(const std::string& path, const SystemModel& system) {
    const CsvTable table = read_csv(path);
    const std::size_t c_step = table.column("step");
    const std::size_t c_zone = table.column("zone");
    const std::size_t c_load = table.column("load");
    const std::size_t c_wind = table.column("wind");
    const std::size_t c_solar = table.column("solar");

    std::size_t max_step = 0;
    for (const auto& row : table.rows)
        max_step = std::max(max_step, static_cast<std::size_t>(std::stoul(row[c_step])));
    Trajectory traj(max_step + 1);
    for (const auto& row : table.rows) {
        const std::size_t step = std::stoul(row[c_step]);
        const std::string& zone = row[c_zone];
        traj[step].zonal_load[zone] = std::stod(row[c_load]);
        traj[step].zonal_wind[zone] = std::stod(row[c_wind]);
        traj[step].zonal_solar[zone] = std::stod(row[c_solar]);
    }
    for (const auto& r : traj) validate_realization(r, system);
    return traj;
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    CsvWriter w(path);
    w.row({"step", "zone", "load", "wind", "solar"});
    for (std::size_t t = 0; t < traj.size(); ++t) {
        for (const auto& [zone, load] : traj[t].zonal_load) {
            w.row({std::to_string(t), zone, fmt_double(load),
                   fmt_double(traj[t].zonal_wind.at(zone)),
                   fmt_double(traj[t].zonal_solar.at(zone))});
        }
    }
    w.flush_and_check(path);
}

}  // namespace gridrisk
