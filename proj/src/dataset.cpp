#include "gridrisk/dataset.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gridrisk/csv.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

Corpus make_corpus(const ScenarioSet& scenarios, const QoiMatrix& qois,
                   const SystemModel& system, std::int64_t id_offset) {
    if (scenarios.scenarios.size() != qois.scenarios())
        throw std::runtime_error("scenario set and QoI matrix disagree on scenario count");
    Corpus corpus;
    corpus.features = feature_count(system);
    for (std::size_t i = 0; i < scenarios.scenarios.size(); ++i) {
        const Trajectory& traj = scenarios.scenarios[i];
        if (traj.size() != qois.values[i].size())
            throw std::runtime_error("scenario and QoI trajectory lengths differ");
        for (std::size_t t = 0; t < traj.size(); ++t) {
            CorpusRow row;
            row.scenario_id = id_offset + static_cast<std::int64_t>(i);
            row.step = static_cast<std::int32_t>(t);
            row.x = features_of(traj[t], system);
            for (std::size_t k = 0; k < kNumQois; ++k)
                row.y[k] = qoi_component(qois.values[i][t], k);
            corpus.rows.push_back(std::move(row));
        }
    }
    return corpus;
}

void save_qoi_corpus(const QoiMatrix& qois, const std::string& path) {
    CsvWriter w(path);
    w.row({"scenario_id", "step", "cost", "load_shed", "reg_reserve", "op_reserve"});
    for (std::size_t i = 0; i < qois.scenarios(); ++i) {
        for (std::size_t t = 0; t < qois.values[i].size(); ++t) {
            const QoiSample& q = qois.values[i][t];
            w.row({std::to_string(i), std::to_string(t), fmt_double(q.cost),
                   fmt_double(q.load_shed), fmt_double(q.reg_reserve),
                   fmt_double(q.op_reserve)});
        }
    }
    w.flush_and_check(path);
}

QoiMatrix load_qoi_corpus(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("scenario_id");
    const std::size_t c_step = table.column("step");
    const std::size_t c_cost = table.column("cost");
    const std::size_t c_shed = table.column("load_shed");
    const std::size_t c_reg = table.column("reg_reserve");
    const std::size_t c_op = table.column("op_reserve");

    std::size_t max_id = 0, max_step = 0;
    for (const auto& row : table.rows) {
        max_id = std::max(max_id, static_cast<std::size_t>(std::stoul(row[c_id])));
        max_step = std::max(max_step, static_cast<std::size_t>(std::stoul(row[c_step])));
    }
    QoiMatrix m;
    m.values.assign(max_id + 1, std::vector<QoiSample>(max_step + 1));
    for (const auto& row : table.rows) {
        QoiSample& q = m.values[std::stoul(row[c_id])][std::stoul(row[c_step])];
        q.cost = std::stod(row[c_cost]);
        q.load_shed = std::stod(row[c_shed]);
        q.reg_reserve = std::stod(row[c_reg]);
        q.op_reserve = std::stod(row[c_op]);
    }
    m.weights.assign(max_id + 1, 1.0 / static_cast<double>(max_id + 1));
    return m;
}

std::array<Dataset, 24> build_datasets(const Corpus& records, const Corpus* augmented,
                                       std::uint64_t split_seed, double train_fraction) {
    if (records.rows.empty()) throw std::runtime_error("empty training corpus");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::runtime_error("train_fraction must be in (0,1)");

    // Coverage check: every hour must appear, with a consistent feature width.
    std::array<bool, 24> seen{};
    for (const auto& row : records.rows) {
        if (row.x.size() != records.features)
            throw std::runtime_error("corpus rows have inconsistent feature widths");
        const std::size_t hour = static_cast<std::size_t>(row.step) / kStepsPerHour;
        if (hour >= 24) throw std::runtime_error("corpus step outside the 24-hour day");
        seen[hour] = true;
    }
    for (std::size_t h = 0; h < 24; ++h)
        if (!seen[h])
            throw std::runtime_error("corpus is missing steps for hour " + std::to_string(h));

    // Scenario-level split: shuffle distinct ids, first 70% train.
    std::set<std::int64_t> id_set;
    for (const auto& row : records.rows) id_set.insert(row.scenario_id);
    std::vector<std::int64_t> ids(id_set.begin(), id_set.end());
    Rng rng(split_seed);
    rng.shuffle(ids);
    const std::size_t n_train = std::max<std::size_t>(
        1, std::min(ids.size() - 1,
                    static_cast<std::size_t>(
                        std::llround(train_fraction * static_cast<double>(ids.size())))));
    std::set<std::int64_t> train_ids(ids.begin(), ids.begin() + n_train);

    std::array<Dataset, 24> out;
    for (std::size_t h = 0; h < 24; ++h) {
        out[h].hour = h;
        out[h].features = records.features;
    }
    auto push_row = [&](const CorpusRow& row, bool force_train) {
        const std::size_t hour = static_cast<std::size_t>(row.step) / kStepsPerHour;
        Dataset& ds = out[hour];
        const std::uint32_t idx = static_cast<std::uint32_t>(ds.rows());
        ds.x.insert(ds.x.end(), row.x.begin(), row.x.end());
        ds.y.insert(ds.y.end(), row.y.begin(), row.y.end());
        if (force_train || train_ids.count(row.scenario_id))
            ds.train_idx.push_back(idx);
        else
            ds.test_idx.push_back(idx);
    };
    for (const auto& row : records.rows) push_row(row, false);
    if (augmented) {
        if (augmented->features != records.features)
            throw std::runtime_error("augmented corpus feature width mismatch");
        for (const auto& row : augmented->rows) push_row(row, true);
    }
    return out;
}

}  // namespace gridrisk
