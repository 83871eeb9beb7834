#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridrisk/dataset.hpp"

#include "json.hpp"

namespace gridrisk {

struct RfParams {
    int n_trees = 200;
    int max_depth = -1;  // < 0: unlimited
    int min_leaf = 2;
    int mtry = 0;  // 0: ceil(features / 3)
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

struct RfNode {
    std::int32_t feature = -1;  // -1: leaf, `left` indexes the leaf table
    std::int32_t left = 0;
    std::int32_t right = 0;
    double threshold = 0.0;
};

struct RfTree {
    std::vector<RfNode> nodes;
    std::vector<std::array<double, kNumQois>> leaves;

    const std::array<double, kNumQois>& leaf_for(const double* x) const {
        std::int32_t i = 0;
        while (nodes[i].feature >= 0)
            i = (x[nodes[i].feature] <= nodes[i].threshold) ? nodes[i].left : nodes[i].right;
        return leaves[nodes[i].left];
    }
};

// Multivariate regression forest: every leaf stores a 4-vector mean, the
// split criterion sums variance reduction over the four standardized
// outputs, prediction averages leaf vectors across trees.
class RfModel {
public:
    std::vector<RfTree> trees;
    std::size_t features = 0;

    void predict(const double* x, double out[kNumQois]) const;

    nlohmann::json to_json() const;
    static RfModel from_json(const nlohmann::json& j);
};

RfModel train_rf(const Dataset& ds, const RfParams& params);

}  // namespace gridrisk
