#include "gridrisk/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gridrisk/rng.hpp"

namespace gridrisk {

void RfModel::predict(const double* x, double out[kNumQois]) const {
    for (std::size_t k = 0; k < kNumQois; ++k) out[k] = 0.0;
    for (const auto& tree : trees) {
        const auto& leaf = tree.leaf_for(x);
        for (std::size_t k = 0; k < kNumQois; ++k) out[k] += leaf[k];
    }
    const double inv = 1.0 / static_cast<double>(trees.size());
    for (std::size_t k = 0; k < kNumQois; ++k) out[k] *= inv;
}

namespace {

struct TreeBuilder {
    const Dataset& ds;
    const RfParams& params;
    const std::vector<double>& ys;  // standardized targets, [rows x 4]
    Rng& rng;
    int mtry;
    RfTree tree;
    std::vector<std::size_t> feature_order;

    // Per-feature row lists, each sorted by that feature's value. All
    // lists hold the same row multiset.
    using Lists = std::vector<std::vector<std::uint32_t>>;

    std::int32_t build(Lists& lists, int depth) {
        const std::size_t n = lists[0].size();
        const std::size_t f_count = ds.features;

        std::array<double, kNumQois> sum{}, sumsq{};
        for (const std::uint32_t r : lists[0]) {
            const double* y = &ys[r * kNumQois];
            for (std::size_t k = 0; k < kNumQois; ++k) {
                sum[k] += y[k];
                sumsq[k] += y[k] * y[k];
            }
        }
        double sse = 0.0;
        for (std::size_t k = 0; k < kNumQois; ++k)
            sse += sumsq[k] - sum[k] * sum[k] / static_cast<double>(n);

        const bool depth_done = params.max_depth >= 0 && depth >= params.max_depth;
        if (n < 2 * static_cast<std::size_t>(params.min_leaf) || depth_done || sse <= 1e-10)
            return make_leaf(lists[0]);

        // Candidate features in shuffled order; after `mtry` features we
        // keep looking only until some valid split has been seen.
        rng.shuffle(feature_order);
        double best_score = -kInfScore;
        std::size_t best_feature = f_count;
        double best_threshold = 0.0;
        double parent_score = 0.0;
        for (std::size_t k = 0; k < kNumQois; ++k)
            parent_score += sum[k] * sum[k] / static_cast<double>(n);

        for (std::size_t fi = 0; fi < f_count; ++fi) {
            if (fi >= static_cast<std::size_t>(mtry) && best_feature != f_count) break;
            const std::size_t f = feature_order[fi];
            const auto& list = lists[f];
            std::array<double, kNumQois> left{};
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::uint32_t r = list[i];
                const double* y = &ys[r * kNumQois];
                for (std::size_t k = 0; k < kNumQois; ++k) left[k] += y[k];
                const double xv = ds.x[r * ds.features + f];
                const double xn = ds.x[list[i + 1] * ds.features + f];
                if (xn <= xv) continue;  // no boundary between equal values
                const std::size_t n_l = i + 1, n_r = n - n_l;
                if (n_l < static_cast<std::size_t>(params.min_leaf) ||
                    n_r < static_cast<std::size_t>(params.min_leaf))
                    continue;
                double score = 0.0;
                for (std::size_t k = 0; k < kNumQois; ++k) {
                    const double rk = sum[k] - left[k];
                    score += left[k] * left[k] / static_cast<double>(n_l) +
                             rk * rk / static_cast<double>(n_r);
                }
                if (score > best_score + 1e-12) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (xv + xn);
                }
            }
        }
        if (best_feature == f_count || best_score <= parent_score + 1e-12)
            return make_leaf(lists[0]);

        // Stable partition of every feature list by the winning split.
        Lists left_lists(f_count), right_lists(f_count);
        for (std::size_t f = 0; f < f_count; ++f) {
            left_lists[f].reserve(n / 2);
            right_lists[f].reserve(n / 2);
            for (const std::uint32_t r : lists[f]) {
                if (ds.x[r * ds.features + best_feature] <= best_threshold)
                    left_lists[f].push_back(r);
                else
                    right_lists[f].push_back(r);
            }
        }
        lists.clear();
        lists.shrink_to_fit();

        const std::int32_t node_idx = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({static_cast<std::int32_t>(best_feature), 0, 0, best_threshold});
        const std::int32_t l = build(left_lists, depth + 1);
        const std::int32_t r = build(right_lists, depth + 1);
        tree.nodes[node_idx].left = l;
        tree.nodes[node_idx].right = r;
        return node_idx;
    }

    std::int32_t make_leaf(const std::vector<std::uint32_t>& rows) {
        std::array<double, kNumQois> mean{};
        for (const std::uint32_t r : rows) {
            const double* y = ds.row_y(r);
            for (std::size_t k = 0; k < kNumQois; ++k) mean[k] += y[k];
        }
        for (std::size_t k = 0; k < kNumQois; ++k) mean[k] /= static_cast<double>(rows.size());
        const std::int32_t node_idx = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({-1, static_cast<std::int32_t>(tree.leaves.size()), 0, 0.0});
        tree.leaves.push_back(mean);
        return node_idx;
    }

    static constexpr double kInfScore = 1e300;
};

}  // namespace

RfModel train_rf(const Dataset& ds, const RfParams& params) {
    if (ds.train_idx.empty()) throw std::runtime_error("train split is empty");
    if (params.n_trees < 1) throw std::runtime_error("n_trees must be >= 1");
    if (params.min_leaf < 1) throw std::runtime_error("min_leaf must be >= 1");

    const std::size_t f_count = ds.features;
    const int mtry = params.mtry > 0
                         ? std::min<int>(params.mtry, static_cast<int>(f_count))
                         : static_cast<int>((f_count + 2) / 3);

    // Standardize targets once for the split criterion; leaves keep raw units.
    std::array<double, kNumQois> mean{}, var{};
    for (const std::uint32_t r : ds.train_idx)
        for (std::size_t k = 0; k < kNumQois; ++k) mean[k] += ds.row_y(r)[k];
    for (std::size_t k = 0; k < kNumQois; ++k)
        mean[k] /= static_cast<double>(ds.train_idx.size());
    for (const std::uint32_t r : ds.train_idx)
        for (std::size_t k = 0; k < kNumQois; ++k) {
            const double d = ds.row_y(r)[k] - mean[k];
            var[k] += d * d;
        }
    std::vector<double> ys(ds.rows() * kNumQois, 0.0);
    for (std::size_t k = 0; k < kNumQois; ++k) {
        double sd = std::sqrt(var[k] / static_cast<double>(ds.train_idx.size()));
        if (sd < 1e-12) sd = 1.0;
        for (const std::uint32_t r : ds.train_idx)
            ys[r * kNumQois + k] = (ds.row_y(r)[k] - mean[k]) / sd;
    }

    RfModel model;
    model.features = f_count;
    model.trees.resize(params.n_trees);
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> sample;
        if (params.bootstrap) {
            sample.resize(ds.train_idx.size());
            for (auto& s : sample)
                s = ds.train_idx[rng.uniform_index(ds.train_idx.size())];
        } else {
            sample.assign(ds.train_idx.begin(), ds.train_idx.end());
        }

        TreeBuilder::Lists lists(f_count);
        for (std::size_t f = 0; f < f_count; ++f) {
            lists[f] = sample;
            std::stable_sort(lists[f].begin(), lists[f].end(),
                             [&](std::uint32_t a, std::uint32_t b) {
                                 return ds.x[a * f_count + f] < ds.x[b * f_count + f];
                             });
        }

        TreeBuilder builder{ds, params, ys, rng, mtry, {}, {}};
        builder.feature_order.resize(f_count);
        std::iota(builder.feature_order.begin(), builder.feature_order.end(), 0);
        builder.build(lists, 0);
        model.trees[t] = std::move(builder.tree);
    }
    return model;
}

nlohmann::json RfModel::to_json() const {
    nlohmann::json j;
    j["kind"] = "rf";
    j["features"] = features;
    j["trees"] = nlohmann::json::array();
    for (const auto& tree : trees) {
        nlohmann::json jt;
        std::vector<std::int32_t> feat, left, right;
        std::vector<double> thr;
        for (const auto& n : tree.nodes) {
            feat.push_back(n.feature);
            left.push_back(n.left);
            right.push_back(n.right);
            thr.push_back(n.threshold);
        }
        jt["feature"] = feat;
        jt["left"] = left;
        jt["right"] = right;
        jt["threshold"] = thr;
        nlohmann::json jl = nlohmann::json::array();
        for (const auto& leaf : tree.leaves) jl.push_back(leaf);
        jt["leaves"] = jl;
        j["trees"].push_back(std::move(jt));
    }
    return j;
}

RfModel RfModel::from_json(const nlohmann::json& j) {
    if (j.at("kind") != "rf") throw std::runtime_error("not a random-forest model file");
    RfModel m;
    m.features = j.at("features").get<std::size_t>();
    for (const auto& jt : j.at("trees")) {
        RfTree tree;
        const auto feat = jt.at("feature").get<std::vector<std::int32_t>>();
        const auto left = jt.at("left").get<std::vector<std::int32_t>>();
        const auto right = jt.at("right").get<std::vector<std::int32_t>>();
        const auto thr = jt.at("threshold").get<std::vector<double>>();
        for (std::size_t i = 0; i < feat.size(); ++i)
            tree.nodes.push_back({feat[i], left[i], right[i], thr[i]});
        for (const auto& jl : jt.at("leaves"))
            tree.leaves.push_back(jl.get<std::array<double, kNumQois>>());
        m.trees.push_back(std::move(tree));
    }
    return m;
}

}  // namespace gridrisk
