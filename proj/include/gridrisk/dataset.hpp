#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gridrisk/grid_model.hpp"
#include "gridrisk/risk.hpp"

namespace gridrisk {

// One simulated (scenario, step) observation: zonal features in, the
// four QoIs out.
struct CorpusRow {
    std::int64_t scenario_id = 0;
    std::int32_t step = 0;
    std::vector<double> x;
    std::array<double, kNumQois> y{};
};

struct Corpus {
    std::vector<CorpusRow> rows;
    std::size_t features = 0;
};

// Pairs a simulated QoI matrix with its scenario set.
Corpus make_corpus(const ScenarioSet& scenarios, const QoiMatrix& qois,
                   const SystemModel& system, std::int64_t id_offset = 0);

// Simulation-record CSV: scenario_id,step,cost,load_shed,reg_reserve,op_reserve.
void save_qoi_corpus(const QoiMatrix& qois, const std::string& path);
QoiMatrix load_qoi_corpus(const std::string& path);

// Hour-sliced training table. Split indices refer to rows of x/y.
struct Dataset {
    std::size_t hour = 0;
    std::size_t features = 0;
    std::vector<double> x;  // [rows x features], row-major
    std::vector<double> y;  // [rows x 4], row-major
    std::vector<std::uint32_t> train_idx;
    std::vector<std::uint32_t> test_idx;

    std::size_t rows() const { return features == 0 ? 0 : x.size() / features; }
    const double* row_x(std::size_t r) const { return &x[r * features]; }
    const double* row_y(std::size_t r) const { return &y[r * kNumQois]; }
};

// Pools the 12 steps of each hour across scenarios. The 70/30 split is
// seeded-random at scenario granularity so no scenario leaks across
// splits; augmented rows join the train split only.
std::array<Dataset, 24> build_datasets(const Corpus& records, const Corpus* augmented,
                                       std::uint64_t split_seed, double train_fraction = 0.7);

}  // namespace gridrisk
