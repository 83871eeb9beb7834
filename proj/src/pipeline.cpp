#include "gridrisk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "gridrisk/csv.hpp"
#include "gridrisk/parallel.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/scenarios.hpp"
#include "gridrisk/surrogate_bank.hpp"
#include "gridrisk/validate.hpp"
#include "json.hpp"

namespace gridrisk {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const char* risk_case_name(RiskCase c) {
    switch (c) {
        case RiskCase::High: return "high";
        case RiskCase::Medium: return "medium";
        case RiskCase::Low: return "low";
    }
    return "?";
}

RiskCase risk_case_from_name(const std::string& name) {
    if (name == "high") return RiskCase::High;
    if (name == "medium") return RiskCase::Medium;
    if (name == "low") return RiskCase::Low;
    throw std::runtime_error("unknown risk case: " + name + " (use high|medium|low)");
}

namespace {

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_file(const std::string& path, const std::string& producer) {
    if (!fs::exists(path))
        throw std::runtime_error("missing " + path + ": run `gridrisk " + producer +
                                 "` first");
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    const json j = read_json(path);
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("out_dir", c.out_dir);
    get("seed", c.seed);
    get("parallelism", c.parallelism);
    get("da_n", c.da_n);
    get("st_n", c.st_n);
    get("holdout_n", c.holdout_n);
    get("alpha", c.alpha);
    get("gbm_rel_sigma_1h", c.gbm_rel_sigma_1h);
    get("da_warmup_steps", c.da_warmup_steps);
    get("base_days", c.base_days);
    get("mean_load", c.mean_load);
    get("day_scale_low", c.day_scale_low);
    get("day_scale_high", c.day_scale_high);
    get("stress", c.stress);
    get("stress_depth", c.stress_depth);
    get("fixture_stress_hours", c.fixture_stress_hours);
    get("stress_exit_taper", c.stress_exit_taper);
    get("commit_reserve_buffer", c.commit_reserve_buffer);
    get("commit_margin", c.commit_margin);
    get("augment", c.augment);
    get("augment_base_count", c.augment_base_count);
    get("augment_factors", c.augment_factors);
    get("train_fraction", c.train_fraction);
    get("rf_trees", c.rf.n_trees);
    get("rf_max_depth", c.rf.max_depth);
    get("rf_min_leaf", c.rf.min_leaf);
    get("rf_mtry", c.rf.mtry);
    get("rf_bootstrap", c.rf.bootstrap);
    get("nn_lr", c.nn.lr);
    get("nn_batch", c.nn.batch);
    get("nn_max_epochs", c.nn.max_epochs);
    get("nn_patience", c.nn.patience);
    get("assess_every_steps", c.assess_every_steps);
    get("timing_repeats", c.timing_repeats);
    if (j.contains("assess_windows")) {
        c.assess_windows.clear();
        for (const auto& w : j.at("assess_windows"))
            c.assess_windows.emplace_back(w.at(0).get<int>(), w.at(1).get<int>());
    }
    if (c.da_n < 1 || c.st_n < 1) throw std::runtime_error("scenario counts must be >= 1");
    if (c.alpha <= 0.0 || c.alpha > 100.0)
        throw std::runtime_error("alpha must be in (0, 100]");
    return c;
}

void save_config(const RunConfig& c, const std::string& path) {
    json j;
    j["out_dir"] = c.out_dir;
    j["seed"] = c.seed;
    j["parallelism"] = c.parallelism;
    j["da_n"] = c.da_n;
    j["st_n"] = c.st_n;
    j["holdout_n"] = c.holdout_n;
    j["alpha"] = c.alpha;
    j["gbm_rel_sigma_1h"] = c.gbm_rel_sigma_1h;
    j["da_warmup_steps"] = c.da_warmup_steps;
    j["base_days"] = c.base_days;
    j["mean_load"] = c.mean_load;
    j["day_scale_low"] = c.day_scale_low;
    j["day_scale_high"] = c.day_scale_high;
    j["stress"] = c.stress;
    j["stress_depth"] = c.stress_depth;
    j["fixture_stress_hours"] = c.fixture_stress_hours;
    j["stress_exit_taper"] = c.stress_exit_taper;
    j["commit_reserve_buffer"] = c.commit_reserve_buffer;
    j["commit_margin"] = c.commit_margin;
    j["augment"] = c.augment;
    j["augment_base_count"] = c.augment_base_count;
    j["augment_factors"] = c.augment_factors;
    j["train_fraction"] = c.train_fraction;
    j["rf_trees"] = c.rf.n_trees;
    j["rf_max_depth"] = c.rf.max_depth;
    j["rf_min_leaf"] = c.rf.min_leaf;
    j["rf_mtry"] = c.rf.mtry;
    j["rf_bootstrap"] = c.rf.bootstrap;
    j["nn_lr"] = c.nn.lr;
    j["nn_batch"] = c.nn.batch;
    j["nn_max_epochs"] = c.nn.max_epochs;
    j["nn_patience"] = c.nn.patience;
    j["assess_every_steps"] = c.assess_every_steps;
    j["timing_repeats"] = c.timing_repeats;
    json windows = json::array();
    for (const auto& [a, b] : c.assess_windows) windows.push_back({a, b});
    j["assess_windows"] = windows;
    write_json(j, path);
}

void cmd_gen_fixtures(const RunConfig& config) {
    fs::create_directories(config.fixtures_dir());
    fs::create_directories(config.base_days_dir());

    const SystemModel system = build_desk_system();
    save_system(system, config.system_path());

    const std::vector<Trajectory> days = synth_base_days(system, config);
    for (std::size_t i = 0; i < days.size(); ++i) {
        char name[20];
        std::snprintf(name, sizeof(name), "day_%02zu.csv", i);
        save_trajectory_csv(days[i], (fs::path(config.base_days_dir()) / name).string());
    }

    const CommitmentSchedule schedule = build_desk_schedule(system, days, config);
    save_schedule(schedule, system, config.schedule_path());

    json manifest;
    manifest["seed"] = config.seed;
    manifest["base_days"] = days.size();
    manifest["stress"] = config.stress;
    manifest["stress_depth"] = config.stress_depth;
    write_json(manifest, config.fixtures_dir() + "/fixture_manifest.json");
}

namespace {

std::vector<Trajectory> load_base_days(const RunConfig& config, const SystemModel& system) {
    std::vector<Trajectory> days;
    for (std::size_t i = 0;; ++i) {
        char name[20];
        std::snprintf(name, sizeof(name), "day_%02zu.csv", i);
        const std::string path = (fs::path(config.base_days_dir()) / name).string();
        if (!fs::exists(path)) break;
        days.push_back(load_trajectory_csv(path, system));
    }
    if (days.size() < 2)
        throw std::runtime_error("missing base days in " + config.base_days_dir() +
                                 ": run `gridrisk gen-fixtures` first");
    return days;
}

}  // namespace

void cmd_da_assess(const RunConfig& config) {
    require_file(config.system_path(), "gen-fixtures");
    require_file(config.schedule_path(), "gen-fixtures");
    const SystemModel system = load_system(config.system_path());
    const CommitmentSchedule schedule = load_schedule(config.schedule_path(), system);
    const std::vector<Trajectory> days = load_base_days(config, system);
    fs::create_directories(config.da_dir());

    const auto t0 = Clock::now();
    const ScenarioSet da =
        dirichlet_mix(days, config.da_n, 1e-2, derive_seed(config.seed, 0xda));
    save_scenario_set(da, config.da_dir() + "/scenarios");

    const DispatchState y0 = initial_dispatch(system, schedule);
    const OracleEvaluator oracle(system, schedule, y0, 0, config.da_warmup_steps);
    const QoiMatrix qois = propagate(oracle, da, config.parallelism);
    save_qoi_corpus(qois, config.da_dir() + "/corpus.csv");

    const RiskProfile profile = risk_profile(qois, system, config.alpha);
    save_risk_profile(profile, config.da_dir() + "/profile.csv");

    // Held-out scenarios reserved for real-time case selection.
    const ScenarioSet holdout =
        dirichlet_mix(days, config.holdout_n, 1e-2, derive_seed(config.seed, 0x01d));
    save_scenario_set(holdout, config.da_dir() + "/holdout_scenarios");
    const QoiMatrix holdout_qois = propagate(oracle, holdout, config.parallelism);
    save_qoi_corpus(holdout_qois, config.da_dir() + "/holdout_corpus.csv");

    json manifest;
    manifest["seed"] = config.seed;
    manifest["alpha"] = config.alpha;
    manifest["evaluator"] = "oracle";
    manifest["provenance"] = "DA";
    manifest["da_n"] = config.da_n;
    manifest["holdout_n"] = config.holdout_n;
    manifest["thresholds"] = {{"mrr_reg", system.mrr_reg},
                              {"mrr_op", system.mrr_op},
                              {"load_shed", 0.0}};

    if (config.augment) {
        // Stressed copies of a seeded subset of the DA scenarios,
        // simulated with the oracle; they feed training only.
        Rng rng(derive_seed(config.seed, 0xa06));
        std::vector<std::size_t> order(da.scenarios.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        ScenarioSet subset;
        subset.provenance = Provenance::DA;
        subset.seed = da.seed;
        const std::size_t count = std::min(config.augment_base_count, order.size());
        for (std::size_t i = 0; i < count; ++i)
            subset.scenarios.push_back(da.scenarios[order[i]]);
        subset.weights.assign(subset.scenarios.size(),
                              1.0 / static_cast<double>(subset.scenarios.size()));
        const ScenarioSet augmented = augment_unsafe(system, schedule, subset,
                                                     config.augment_factors,
                                                     derive_seed(config.seed, 0xa07));
        save_scenario_set(augmented, config.da_dir() + "/augmented_scenarios");

        // Not risk estimation, so this bypasses propagate()'s provenance
        // gate on purpose.
        QoiMatrix aug_qois;
        aug_qois.values.resize(augmented.scenarios.size());
        aug_qois.weights = augmented.weights;
        parallel_for(augmented.scenarios.size(), config.parallelism, [&](std::size_t i) {
            aug_qois.values[i] = oracle.evaluate(augmented.scenarios[i]);
        });
        save_qoi_corpus(aug_qois, config.da_dir() + "/corpus_augmented.csv");
        manifest["augmented_n"] = augmented.scenarios.size();
        manifest["augment_factors"] = config.augment_factors;
    }

    manifest["wall_ms"] = elapsed_ms(t0);
    write_json(manifest, config.da_dir() + "/manifest.json");
}

void cmd_train(const RunConfig& config) {
    require_file(config.da_dir() + "/corpus.csv", "da-assess");
    const SystemModel system = load_system(config.system_path());
    const ScenarioSet da = load_scenario_set(config.da_dir() + "/scenarios", system);
    const QoiMatrix qois = load_qoi_corpus(config.da_dir() + "/corpus.csv");
    fs::create_directories(config.models_dir());

    const Corpus records = make_corpus(da, qois, system);
    Corpus augmented;
    const bool has_aug = fs::exists(config.da_dir() + "/corpus_augmented.csv");
    if (has_aug) {
        const ScenarioSet aug_scen =
            load_scenario_set(config.da_dir() + "/augmented_scenarios", system);
        const QoiMatrix aug_qois = load_qoi_corpus(config.da_dir() + "/corpus_augmented.csv");
        augmented = make_corpus(aug_scen, aug_qois, system, 1'000'000'000);
    }
    const std::array<Dataset, 24> datasets = build_datasets(
        records, has_aug ? &augmented : nullptr, derive_seed(config.seed, 0x59173),
        config.train_fraction);

    const std::array<HalParams, kNumQois> hal = default_qoi_hal(system);
    const std::vector<std::string> feature_order = feature_names(system);

    const ModelKind kinds[3] = {ModelKind::Rf, ModelKind::NnMae, ModelKind::NnHal};
    std::vector<ValidationReport> reports;
    json manifest;
    const auto t0 = Clock::now();
    for (const ModelKind kind : kinds) {
        JitTrainOptions opts;
        opts.kind = kind;
        opts.rf = config.rf;
        opts.nn = config.nn;
        opts.hal = hal;
        opts.seed = derive_seed(config.seed, 0x700 + static_cast<std::uint64_t>(kind));
        opts.parallelism = config.parallelism;
        opts.continue_on_error = true;

        const auto tk = Clock::now();
        SurrogateBank bank = jit_train(datasets, feature_order, opts);
        const ValidationReport report = validate_bank(bank, datasets, hal);
        reports.push_back(report);

        json metrics;
        for (std::size_t k = 0; k < kNumQois; ++k) {
            json cell;
            cell["safe_nmae"] = report.per_qoi[k].safe_nmae;
            if (report.per_qoi[k].unsafe_nmae) cell["unsafe_nmae"] = *report.per_qoi[k].unsafe_nmae;
            cell["hal_metric"] = report.per_qoi[k].hal_metric;
            cell["unsafe_rows"] = report.per_qoi[k].unsafe_rows;
            metrics[kQoiNames[k]] = cell;
        }
        bank.manifest["validation"] = metrics;
        save_bank(bank, config.models_dir() + "/" + model_kind_name(kind));
        manifest[model_kind_name(kind)] = {{"wall_ms", elapsed_ms(tk)}, {"metrics", metrics}};
    }

    // Table-shaped validation summary: one row per QoI and model, unsafe
    // cells left empty when the region never occurs.
    {
        CsvWriter w(config.models_dir() + "/validation_report.csv");
        w.row({"qoi", "model", "safe_nmae", "unsafe_nmae"});
        for (std::size_t k = 0; k < kNumQois; ++k) {
            for (std::size_t m = 0; m < reports.size(); ++m) {
                const QoiValidation& v = reports[m].per_qoi[k];
                w.row({kQoiNames[k], reports[m].model_id, fmt_double(v.safe_nmae),
                       v.unsafe_nmae ? fmt_double(*v.unsafe_nmae) : std::string()});
            }
        }
        w.flush_and_check("validation_report.csv");
    }

    const std::size_t chosen = select_model(reports);
    json selection;
    selection["selected"] = reports[chosen].model_id;
    selection["candidates"] = {reports[0].model_id, reports[1].model_id,
                               reports[2].model_id};
    write_json(selection, config.models_dir() + "/selection.json");
    manifest["selected"] = reports[chosen].model_id;
    manifest["wall_ms"] = elapsed_ms(t0);
    write_json(manifest, config.models_dir() + "/manifest.json");
}

namespace {

struct CaseSelection {
    std::size_t index = 0;
    double consequence = 0.0;
};

// Daily shed + reserve-shortage consequence, the case-ranking statistic.
double daily_consequence(const std::vector<QoiSample>& traj, const SystemModel& system) {
    double total = 0.0;
    for (const QoiSample& q : traj) {
        total += system.voll * q.load_shed;
        total += system.voll * std::max(system.mrr_op - q.op_reserve, 0.0);
        total += system.voll * std::max(system.mrr_reg - q.reg_reserve, 0.0);
    }
    return total;
}

CaseSelection select_case(const QoiMatrix& holdout, const SystemModel& system,
                          RiskCase risk_case) {
    std::vector<CaseSelection> ranked(holdout.scenarios());
    for (std::size_t i = 0; i < holdout.scenarios(); ++i)
        ranked[i] = {i, daily_consequence(holdout.values[i], system)};
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.consequence < b.consequence;
    });
    switch (risk_case) {
        case RiskCase::Low: return ranked.front();
        case RiskCase::Medium: return ranked[ranked.size() / 2];
        case RiskCase::High: return ranked.back();
    }
    throw std::logic_error("unreachable");
}

std::vector<std::size_t> window_starts(const RunConfig& config) {
    std::vector<std::size_t> starts;
    for (const auto& [h_begin, h_end] : config.assess_windows) {
        for (std::size_t s = static_cast<std::size_t>(h_begin) * kStepsPerHour;
             s < static_cast<std::size_t>(h_end) * kStepsPerHour;
             s += config.assess_every_steps) {
            if (s + kStepsPerHour <= kStepsPerDay) starts.push_back(s);
        }
    }
    return starts;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

void cmd_rt_assess(const RunConfig& config, RiskCase risk_case) {
    require_file(config.da_dir() + "/holdout_corpus.csv", "da-assess");
    require_file(config.models_dir() + "/selection.json", "train");
    const SystemModel system = load_system(config.system_path());
    const CommitmentSchedule schedule = load_schedule(config.schedule_path(), system);
    const ScenarioSet holdout =
        load_scenario_set(config.da_dir() + "/holdout_scenarios", system);
    const QoiMatrix holdout_qois = load_qoi_corpus(config.da_dir() + "/holdout_corpus.csv");

    const std::string selected =
        read_json(config.models_dir() + "/selection.json").at("selected").get<std::string>();
    const char* bank_names[3] = {"rf", "nn_mae", "nn_hal"};
    std::array<SurrogateBank, 3> banks;
    std::size_t selected_idx = 0;
    for (std::size_t b = 0; b < 3; ++b) {
        banks[b] = load_bank(config.models_dir() + "/" + bank_names[b]);
        if (selected == bank_names[b]) selected_idx = b;
    }

    const CaseSelection chosen = select_case(holdout_qois, system, risk_case);
    const Trajectory& actual = holdout.scenarios[chosen.index];

    // Baseline chain over the actual day provides the dispatch state at
    // every window start.
    std::vector<DispatchState> dispatches;
    const DispatchState y0 = initial_dispatch(system, schedule);
    simulate_day(system, schedule, y0, actual, &dispatches);

    const std::string dir = config.rt_dir(risk_case);
    fs::create_directories(dir);

    CsvWriter oracle_csv(dir + "/profile_oracle.csv");
    CsvWriter surrogate_csv(dir + "/profile_surrogate.csv");
    for (auto* w : {&oracle_csv, &surrogate_csv})
        w->row({"window_start", "step", "qoi", "level1", "level2", "level3"});
    CsvWriter trace_csv(dir + "/qoi_trace.csv");
    trace_csv.row({"window_start", "step", "qoi", "evaluator", "mean"});
    CsvWriter window_csv(dir + "/window_risk.csv");
    window_csv.row({"window_start", "qoi", "evaluator", "level3_mean", "level2_mean"});

    const std::vector<std::size_t> starts = window_starts(config);
    // Window-level level-3 risk per evaluator: [evaluator][qoi][window].
    // Evaluator 0 is the oracle, 1..3 the banks.
    std::array<std::array<std::vector<double>, kNumQois>, 4> window_risk;

    std::vector<double> oracle_ms, surrogate_ms;
    auto emit_profile = [&](CsvWriter& w, const RiskProfile& p, std::size_t s0) {
        for (std::size_t t = 0; t < p.steps.size(); ++t)
            for (std::size_t k = 0; k < kNumQois; ++k)
                w.row({std::to_string(s0), std::to_string(s0 + t), kQoiNames[k],
                       fmt_double(p.steps[t][k].level1), fmt_double(p.steps[t][k].level2),
                       fmt_double(p.steps[t][k].level3)});
    };
    auto emit_trace = [&](const QoiMatrix& m, std::size_t s0, const char* evaluator) {
        for (std::size_t t = 0; t < m.steps(); ++t) {
            for (std::size_t k = 0; k < kNumQois; ++k) {
                double mean = 0.0;
                for (std::size_t i = 0; i < m.scenarios(); ++i)
                    mean += m.weights[i] * qoi_component(m.values[i][t], k);
                trace_csv.row({std::to_string(s0), std::to_string(s0 + t), kQoiNames[k],
                               evaluator, fmt_double(mean)});
            }
        }
    };
    auto window_means = [&](const RiskProfile& p, std::size_t evaluator_idx, std::size_t s0,
                            const char* name) {
        for (std::size_t k = 0; k < kNumQois; ++k) {
            double l3 = 0.0, l2 = 0.0;
            for (const auto& step : p.steps) {
                l3 += step[k].level3;
                l2 += step[k].level2;
            }
            l3 /= static_cast<double>(p.steps.size());
            l2 /= static_cast<double>(p.steps.size());
            window_risk[evaluator_idx][k].push_back(l3);
            window_csv.row({std::to_string(s0), kQoiNames[k], name, fmt_double(l3),
                            fmt_double(l2)});
        }
    };

    for (const std::size_t s0 : starts) {
        Trajectory hour_actual(actual.begin() + s0, actual.begin() + s0 + kStepsPerHour);
        const ScenarioSet st = gbm_short_term(
            hour_actual, config.st_n, config.gbm_rel_sigma_1h,
            derive_seed(config.seed, 0x57000 + s0 * 8 + static_cast<std::size_t>(risk_case)));

        const DispatchState& y0_window = dispatches[s0 - 1];
        const OracleEvaluator oracle(system, schedule, y0_window, s0);
        const auto t_oracle = Clock::now();
        const QoiMatrix oracle_qois = propagate(oracle, st, config.parallelism);
        oracle_ms.push_back(elapsed_ms(t_oracle) / static_cast<double>(config.st_n));

        const RiskProfile oracle_profile = risk_profile(oracle_qois, system, config.alpha);
        emit_profile(oracle_csv, oracle_profile, s0);
        emit_trace(oracle_qois, s0, "oracle");
        window_means(oracle_profile, 0, s0, "oracle");

        for (std::size_t b = 0; b < 3; ++b) {
            const SurrogateEvaluator surrogate(banks[b], system, s0);
            QoiMatrix bank_qois;
            if (b == selected_idx) {
                // Median of repeated timed runs, warm caches.
                std::vector<double> times;
                for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
                    const auto t_s = Clock::now();
                    bank_qois = propagate(surrogate, st, config.parallelism);
                    times.push_back(elapsed_ms(t_s) / static_cast<double>(config.st_n));
                }
                surrogate_ms.push_back(median(times));
            } else {
                bank_qois = propagate(surrogate, st, config.parallelism);
            }
            const RiskProfile bank_profile = risk_profile(bank_qois, system, config.alpha);
            window_means(bank_profile, 1 + b, s0, bank_names[b]);
            if (b == selected_idx) {
                emit_profile(surrogate_csv, bank_profile, s0);
                emit_trace(bank_qois, s0, "surrogate");
            }
        }
    }
    oracle_csv.flush_and_check("profile_oracle.csv");
    surrogate_csv.flush_and_check("profile_surrogate.csv");
    trace_csv.flush_and_check("qoi_trace.csv");
    window_csv.flush_and_check("window_risk.csv");

    // Table-shaped error summary of the level-3 risk predictions:
    // MAE and hazard-aware error over assessment windows, per bank, for
    // the three thresholded QoIs, next to the oracle's mean risk.
    HalParams risk_hal;  // default weights; any nonzero risk is adverse
    risk_hal.qbar = 0.0;
    risk_hal.direction = Direction::Above;
    {
        CsvWriter err_csv(dir + "/error_report.csv");
        err_csv.row({"qoi", "model", "mae", "hal", "oracle_mean_risk"});
        for (std::size_t k : {std::size_t{2}, std::size_t{3}, std::size_t{1}}) {
            double mean_risk = 0.0;
            for (const double r : window_risk[0][k]) mean_risk += r;
            mean_risk /= static_cast<double>(std::max<std::size_t>(1, starts.size()));
            for (std::size_t b = 0; b < 3; ++b) {
                double mae = 0.0, hal = 0.0;
                for (std::size_t wi = 0; wi < starts.size(); ++wi) {
                    const double truth = window_risk[0][k][wi];
                    const double pred = window_risk[1 + b][k][wi];
                    mae += std::fabs(pred - truth);
                    hal += hal_loss(truth, pred, risk_hal);
                }
                mae /= static_cast<double>(starts.size());
                hal /= static_cast<double>(starts.size());
                err_csv.row({kQoiNames[k], bank_names[b], fmt_double(mae), fmt_double(hal),
                             fmt_double(mean_risk)});
            }
        }
        err_csv.flush_and_check("error_report.csv");
    }

    json manifest;
    manifest["case"] = risk_case_name(risk_case);
    manifest["scenario_index"] = chosen.index;
    manifest["consequence"] = chosen.consequence;
    manifest["windows"] = starts.size();
    manifest["st_n"] = config.st_n;
    manifest["selected_bank"] = bank_names[selected_idx];
    manifest["oracle_ms_per_scenario_median"] = median(oracle_ms);
    manifest["surrogate_ms_per_scenario_median"] = median(surrogate_ms);
    manifest["speedup"] = median(surrogate_ms) > 0.0
                              ? median(oracle_ms) / median(surrogate_ms)
                              : 0.0;
    manifest["timing_method"] =
        "wall clock per scenario; surrogate median of repeated runs, warm caches";
    manifest["timing_repeats"] = config.timing_repeats;
    write_json(manifest, dir + "/manifest.json");
}

void cmd_report(const RunConfig& config) {
    require_file(config.da_dir() + "/profile.csv", "da-assess");
    require_file(config.models_dir() + "/validation_report.csv", "train");
    fs::create_directories(config.report_dir());

    // DA probability/risk curves per QoI.
    {
        const RiskProfile profile = load_risk_profile(config.da_dir() + "/profile.csv");
        CsvWriter w(config.report_dir() + "/da_risk_curves.csv");
        w.row({"step", "qoi", "level1", "probability", "risk"});
        for (std::size_t t = 0; t < profile.steps.size(); ++t)
            for (std::size_t k = 0; k < kNumQois; ++k)
                w.row({std::to_string(t), kQoiNames[k], fmt_double(profile.steps[t][k].level1),
                       fmt_double(profile.steps[t][k].level2),
                       fmt_double(profile.steps[t][k].level3)});
        w.flush_and_check("da_risk_curves.csv");
    }

    const RiskCase cases[3] = {RiskCase::High, RiskCase::Medium, RiskCase::Low};
    std::vector<RiskCase> available;
    for (const RiskCase c : cases)
        if (fs::exists(config.rt_dir(c) + "/window_risk.csv")) available.push_back(c);
    if (available.empty())
        throw std::runtime_error("no real-time assessments found under " + config.out_dir +
                                 "/rt: run `gridrisk rt-assess` first");

    auto copy_with_case = [&](const char* in_name, const char* out_name) {
        CsvWriter w(config.report_dir() + "/" + out_name);
        bool wrote_header = false;
        for (const RiskCase c : available) {
            const CsvTable t = read_csv(config.rt_dir(c) + "/" + in_name);
            if (!wrote_header) {
                std::vector<std::string> header = {"case"};
                header.insert(header.end(), t.header.begin(), t.header.end());
                w.row(header);
                wrote_header = true;
            }
            for (const auto& row : t.rows) {
                std::vector<std::string> out = {risk_case_name(c)};
                out.insert(out.end(), row.begin(), row.end());
                w.row(out);
            }
        }
        w.flush_and_check(out_name);
    };
    // Oracle-vs-surrogate QoI traces and window risk traces per case.
    copy_with_case("qoi_trace.csv", "rt_qoi_traces.csv");
    copy_with_case("window_risk.csv", "rt_risk_traces.csv");
    copy_with_case("error_report.csv", "rt_error_summary.csv");

    // Validation summary (pooled safe/unsafe NMAE per QoI and model).
    {
        const CsvTable t = read_csv(config.models_dir() + "/validation_report.csv");
        CsvWriter w(config.report_dir() + "/validation_summary.csv");
        w.row(t.header);
        for (const auto& row : t.rows) w.row(row);
        w.flush_and_check("validation_summary.csv");
    }
}

}  // namespace gridrisk
