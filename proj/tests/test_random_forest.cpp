#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "gridrisk/random_forest.hpp"
#include "gridrisk/rng.hpp"

using namespace gridrisk;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& x,
                     const std::vector<std::array<double, kNumQois>>& y,
                     double train_fraction = 1.0) {
    Dataset ds;
    ds.features = x[0].size();
    for (std::size_t r = 0; r < x.size(); ++r) {
        ds.x.insert(ds.x.end(), x[r].begin(), x[r].end());
        ds.y.insert(ds.y.end(), y[r].begin(), y[r].end());
    }
    const std::size_t n_train =
        std::max<std::size_t>(1, static_cast<std::size_t>(train_fraction * x.size()));
    for (std::size_t r = 0; r < x.size(); ++r) {
        if (r < n_train)
            ds.train_idx.push_back(static_cast<std::uint32_t>(r));
        else
            ds.test_idx.push_back(static_cast<std::uint32_t>(r));
    }
    return ds;
}

// Known multivariate linear map for fixture data.
std::array<double, kNumQois> linear_map(const std::vector<double>& x) {
    return {3.0 * x[0] + 2.0 * x[1] - x[2] + 10.0,  //
            0.5 * x[0] + 0.1 * x[3],                //
            4.0 * x[2] + x[4] + 5.0,                //
            -2.0 * x[1] + 3.0 * x[4] + 50.0};
}

}  // namespace

TEST_CASE("a single-row train set predicts that row everywhere") {
    const Dataset ds = make_dataset({{1.0, 2.0}}, {{10.0, 0.0, 5.0, 7.0}});
    RfParams params;
    params.n_trees = 5;
    params.seed = 1;
    const RfModel model = train_rf(ds, params);
    double out[kNumQois];
    const double probe[2] = {-100.0, 42.0};
    model.predict(probe, out);
    CHECK(out[0] == doctest::Approx(10.0));
    CHECK(out[2] == doctest::Approx(5.0));
}

TEST_CASE("an unpruned single tree memorizes unique rows") {
    Rng rng(9);
    std::vector<std::vector<double>> x;
    std::vector<std::array<double, kNumQois>> y;
    for (int i = 0; i < 60; ++i) {
        x.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
        y.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 1.0),
                     rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});
    }
    const Dataset ds = make_dataset(x, y);
    RfParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.min_leaf = 1;
    params.mtry = 3;  // all features
    params.seed = 4;
    const RfModel model = train_rf(ds, params);
    for (std::size_t r = 0; r < x.size(); ++r) {
        double out[kNumQois];
        model.predict(x[r].data(), out);
        for (std::size_t k = 0; k < kNumQois; ++k)
            CHECK(out[k] == doctest::Approx(y[r][k]).epsilon(1e-10));
    }
}

TEST_CASE("a forest learns a linear fixture to under 5% test NMAE") {
    Rng rng(101);
    std::vector<std::vector<double>> x;
    std::vector<std::array<double, kNumQois>> y;
    for (int i = 0; i < 5000; ++i) {
        std::vector<double> row(5);
        for (auto& v : row) v = rng.uniform(0.0, 10.0);
        y.push_back(linear_map(row));
        x.push_back(std::move(row));
    }
    const Dataset ds = make_dataset(x, y, 0.7);
    RfParams params;
    params.n_trees = 150;
    params.min_leaf = 2;
    params.mtry = 4;
    params.seed = 2024;
    const RfModel model = train_rf(ds, params);

    std::array<double, kNumQois> abs_err{}, mean_abs{};
    for (const auto r : ds.test_idx) {
        double out[kNumQois];
        model.predict(ds.row_x(r), out);
        for (std::size_t k = 0; k < kNumQois; ++k) {
            abs_err[k] += std::fabs(out[k] - ds.row_y(r)[k]);
            mean_abs[k] += std::fabs(ds.row_y(r)[k]);
        }
    }
    for (std::size_t k = 0; k < kNumQois; ++k) {
        const double nmae = abs_err[k] / mean_abs[k];
        INFO("output ", k, " NMAE ", nmae);
        CHECK(nmae < 0.05);
    }
}

TEST_CASE("predictions stay inside the train-target envelope") {
    Rng rng(55);
    std::vector<std::vector<double>> x;
    std::vector<std::array<double, kNumQois>> y;
    std::array<double, kNumQois> lo{}, hi{};
    lo.fill(1e300);
    hi.fill(-1e300);
    for (int i = 0; i < 400; ++i) {
        x.push_back({rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
        std::array<double, kNumQois> t{};
        for (std::size_t k = 0; k < kNumQois; ++k) {
            t[k] = rng.uniform(-100.0, 100.0);
            lo[k] = std::min(lo[k], t[k]);
            hi[k] = std::max(hi[k], t[k]);
        }
        y.push_back(t);
    }
    const Dataset ds = make_dataset(x, y);
    RfParams params;
    params.n_trees = 30;
    params.seed = 3;
    const RfModel model = train_rf(ds, params);
    for (int probe = 0; probe < 200; ++probe) {
        const double p[2] = {rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
        double out[kNumQois];
        model.predict(p, out);
        for (std::size_t k = 0; k < kNumQois; ++k) {
            CHECK(out[k] >= lo[k] - 1e-9);
            CHECK(out[k] <= hi[k] + 1e-9);
        }
    }
}

TEST_CASE("training is deterministic and survives JSON serialization") {
    Rng rng(77);
    std::vector<std::vector<double>> x;
    std::vector<std::array<double, kNumQois>> y;
    for (int i = 0; i < 300; ++i) {
        x.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
        y.push_back(linear_map({x.back()[0], x.back()[1], x.back()[2], 0.0, 0.0}));
    }
    const Dataset ds = make_dataset(x, y);
    RfParams params;
    params.n_trees = 10;
    params.seed = 31337;
    const RfModel a = train_rf(ds, params);
    const RfModel b = train_rf(ds, params);
    const RfModel c = RfModel::from_json(a.to_json());

    Rng probe_rng(1);
    for (int probe = 0; probe < 50; ++probe) {
        const double p[3] = {probe_rng.uniform(0.0, 1.0), probe_rng.uniform(0.0, 1.0),
                             probe_rng.uniform(0.0, 1.0)};
        double oa[kNumQois], ob[kNumQois], oc[kNumQois];
        a.predict(p, oa);
        b.predict(p, ob);
        c.predict(p, oc);
        for (std::size_t k = 0; k < kNumQois; ++k) {
            CHECK(oa[k] == ob[k]);
            CHECK(oa[k] == oc[k]);
        }
    }
}

TEST_CASE("degenerate parameters are rejected") {
    const Dataset ds = make_dataset({{1.0}}, {{1.0, 0.0, 0.0, 0.0}});
    RfParams params;
    params.n_trees = 0;
    CHECK_THROWS_AS(train_rf(ds, params), std::runtime_error);
    Dataset empty;
    empty.features = 1;
    CHECK_THROWS_AS(train_rf(empty, RfParams{}), std::runtime_error);
}
