#include "doctest.h"

#include <stdexcept>

#include <filesystem>
#include <set>

#include "gridrisk/dataset.hpp"
#include "gridrisk/rng.hpp"

using namespace gridrisk;

namespace {

// Synthetic single-feature corpus covering all 288 steps.
Corpus synth_corpus(std::size_t scenarios, std::int64_t id_offset = 0,
                    double y_shift = 0.0) {
    Corpus c;
    c.features = 1;
    Rng rng(5 + static_cast<std::uint64_t>(id_offset));
    for (std::size_t i = 0; i < scenarios; ++i) {
        for (std::size_t t = 0; t < kStepsPerDay; ++t) {
            CorpusRow row;
            row.scenario_id = id_offset + static_cast<std::int64_t>(i);
            row.step = static_cast<std::int32_t>(t);
            row.x = {rng.uniform(0.0, 1.0)};
            row.y = {row.x[0] + y_shift, 0.0, 500.0, 2500.0};
            c.rows.push_back(std::move(row));
        }
    }
    return c;
}

}  // namespace

TEST_CASE("2500 scenarios pool into 30,000-row hour datasets") {
    const Corpus corpus = synth_corpus(2500);
    const auto datasets = build_datasets(corpus, nullptr, 7);
    for (std::size_t h = 0; h < 24; ++h) {
        CHECK(datasets[h].hour == h);
        CHECK(datasets[h].rows() == 30000);
        CHECK(datasets[h].train_idx.size() + datasets[h].test_idx.size() == 30000);
    }
}

TEST_CASE("the split is at scenario granularity with no leakage") {
    const Corpus corpus = synth_corpus(40);
    const auto datasets = build_datasets(corpus, nullptr, 11);

    // Recover each row's scenario id from its position: rows are pushed
    // in corpus order, 12 rows per scenario per hour.
    for (std::size_t h = 0; h < 24; ++h) {
        const Dataset& ds = datasets[h];
        std::set<std::size_t> train_scen, test_scen;
        for (const auto idx : ds.train_idx) train_scen.insert(idx / kStepsPerHour);
        for (const auto idx : ds.test_idx) test_scen.insert(idx / kStepsPerHour);
        for (const auto s : train_scen) CHECK(test_scen.count(s) == 0);
        CHECK(train_scen.size() == 28);  // round(0.7 * 40)
        CHECK(test_scen.size() == 12);
    }
}

TEST_CASE("augmented rows land in the train split only") {
    const Corpus corpus = synth_corpus(20);
    const Corpus augmented = synth_corpus(5, 1'000'000, 10.0);
    const auto datasets = build_datasets(corpus, &augmented, 3);
    for (std::size_t h = 0; h < 24; ++h) {
        const Dataset& ds = datasets[h];
        CHECK(ds.rows() == (20 + 5) * kStepsPerHour);
        const std::size_t first_aug = 20 * kStepsPerHour;
        for (const auto idx : ds.test_idx) CHECK(idx < first_aug);
        std::size_t aug_in_train = 0;
        for (const auto idx : ds.train_idx)
            if (idx >= first_aug) ++aug_in_train;
        CHECK(aug_in_train == 5 * kStepsPerHour);
    }
}

TEST_CASE("incomplete hour coverage is rejected") {
    Corpus corpus = synth_corpus(3);
    std::erase_if(corpus.rows,
                  [](const CorpusRow& r) { return r.step / 12 == 13; });
    CHECK_THROWS_WITH_AS(build_datasets(corpus, nullptr, 1), doctest::Contains("hour 13"),
                         std::runtime_error);
}

TEST_CASE("the split is seeded and reproducible") {
    const Corpus corpus = synth_corpus(30);
    const auto a = build_datasets(corpus, nullptr, 42);
    const auto b = build_datasets(corpus, nullptr, 42);
    const auto c = build_datasets(corpus, nullptr, 43);
    CHECK(a[0].train_idx == b[0].train_idx);
    CHECK(a[0].test_idx == b[0].test_idx);
    CHECK(a[0].train_idx != c[0].train_idx);
}

TEST_CASE("QoI corpus CSV round-trips") {
    QoiMatrix m;
    m.values.assign(4, std::vector<QoiSample>(6));
    Rng rng(17);
    for (auto& row : m.values)
        for (auto& q : row) {
            q.cost = rng.uniform(1e3, 1e5);
            q.load_shed = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.0, 30.0);
            q.reg_reserve = rng.uniform(400.0, 600.0);
            q.op_reserve = q.reg_reserve + rng.uniform(0.0, 2000.0);
        }
    m.weights.assign(4, 0.25);
    const std::string path =
        (std::filesystem::temp_directory_path() / "corpus_roundtrip.csv").string();
    save_qoi_corpus(m, path);
    const QoiMatrix back = load_qoi_corpus(path);
    REQUIRE(back.scenarios() == 4);
    REQUIRE(back.steps() == 6);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t t = 0; t < 6; ++t) {
            CHECK(back.values[i][t].cost ==
                  doctest::Approx(m.values[i][t].cost).epsilon(1e-10));
            CHECK(back.values[i][t].op_reserve ==
                  doctest::Approx(m.values[i][t].op_reserve).epsilon(1e-10));
        }
}
