#include "gridrisk/surrogate_bank.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "gridrisk/parallel.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

namespace fs = std::filesystem;
using nlohmann::json;

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Rf: return "rf";
        case ModelKind::NnMae: return "nn_mae";
        case ModelKind::NnHal: return "nn_hal";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "rf") return ModelKind::Rf;
    if (name == "nn_mae") return ModelKind::NnMae;
    if (name == "nn_hal") return ModelKind::NnHal;
    throw std::runtime_error("unknown model kind: " + name);
}

void SurrogateModel::predict_raw(const double* x, double out[kNumQois]) const {
    if (std::holds_alternative<RfModel>(impl))
        std::get<RfModel>(impl).predict(x, out);
    else
        std::get<MlpModel>(impl).predict(x, out);
}

std::size_t SurrogateModel::features() const {
    if (std::holds_alternative<RfModel>(impl)) return std::get<RfModel>(impl).features;
    return std::get<MlpModel>(impl).dims.front();
}

QoiSample SurrogateBank::predict(std::size_t hour, const std::vector<double>& features) const {
    if (hour >= hours.size()) throw std::out_of_range("bank hour out of range");
    const SurrogateModel& model = hours[hour];
    if (features.size() != model.features())
        throw std::invalid_argument("feature vector length does not match the bank");
    double raw[kNumQois];
    model.predict_raw(features.data(), raw);

    QoiSample q;
    q.cost = std::max(0.0, raw[0]);
    q.load_shed = std::max(0.0, raw[1]);
    q.op_reserve = std::max(0.0, raw[3]);
    q.reg_reserve = std::max(0.0, raw[2]);
    if (q.reg_reserve > q.op_reserve) {
        q.reg_reserve = q.op_reserve;
        reg_clips_.fetch_add(1, std::memory_order_relaxed);
    }
    return q;
}

namespace {

// Constant-mean fallback used when an hour's training fails and the
// caller asked the bank to keep going.
RfModel constant_model(const Dataset& ds) {
    std::array<double, kNumQois> mean{};
    const auto& rows = ds.train_idx;
    for (const std::uint32_t r : rows)
        for (std::size_t k = 0; k < kNumQois; ++k) mean[k] += ds.row_y(r)[k];
    for (std::size_t k = 0; k < kNumQois; ++k)
        mean[k] /= static_cast<double>(std::max<std::size_t>(1, rows.size()));
    RfModel m;
    m.features = ds.features;
    RfTree tree;
    tree.nodes.push_back({-1, 0, 0, 0.0});
    tree.leaves.push_back(mean);
    m.trees.push_back(std::move(tree));
    return m;
}

}  // namespace

SurrogateBank jit_train(const std::array<Dataset, 24>& datasets,
                        const std::vector<std::string>& feature_order,
                        const JitTrainOptions& options) {
    for (std::size_t h = 0; h < 24; ++h)
        if (datasets[h].train_idx.empty())
            throw std::runtime_error("hour " + std::to_string(h) + " has no training rows");

    SurrogateBank bank;
    bank.kind = options.kind;
    bank.seed = options.seed;
    bank.feature_order = feature_order;
    bank.hours.resize(24);
    json per_hour = json::array();
    for (std::size_t h = 0; h < 24; ++h) per_hour.push_back(json::object());
    std::array<std::string, 24> errors{};

    parallel_for(24, options.parallelism, [&](std::size_t h) {
        const Dataset& ds = datasets[h];
        const std::uint64_t hour_seed = derive_seed(options.seed, h);
        try {
            if (options.kind == ModelKind::Rf) {
                RfParams rf = options.rf;
                rf.seed = hour_seed;
                bank.hours[h].impl = train_rf(ds, rf);
            } else {
                NnOptions nn = options.nn;
                nn.seed = hour_seed;
                NnLoss loss;
                loss.kind = options.kind == ModelKind::NnHal ? NnLossKind::HAL : NnLossKind::MAE;
                loss.hal = options.hal;
                NnTrainStats stats;
                bank.hours[h].impl = train_nn(ds, loss, nn, &stats);
                per_hour[h]["epochs"] = stats.epochs_run;
                per_hour[h]["best_epoch"] = stats.best_epoch;
                per_hour[h]["best_val_loss"] =
                    stats.best_epoch >= 0 ? stats.val_loss[stats.best_epoch] : 0.0;
            }
            per_hour[h]["train_rows"] = ds.train_idx.size();
            per_hour[h]["test_rows"] = ds.test_idx.size();
            per_hour[h]["seed"] = hour_seed;
        } catch (const std::exception& e) {
            if (!options.continue_on_error)
                throw std::runtime_error("training failed for hour " + std::to_string(h) +
                                         ": " + e.what());
            errors[h] = e.what();
            bank.hours[h].impl = constant_model(ds);
            per_hour[h]["error"] = e.what();
        }
    });

    bank.manifest["kind"] = model_kind_name(options.kind);
    bank.manifest["seed"] = options.seed;
    bank.manifest["feature_order"] = feature_order;
    bank.manifest["hours"] = per_hour;
    return bank;
}

void save_bank(const SurrogateBank& bank, const std::string& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "manifest.json");
        if (!out) throw std::runtime_error("cannot write bank manifest in " + dir);
        out << bank.manifest.dump(2) << '\n';
    }
    for (std::size_t h = 0; h < bank.hours.size(); ++h) {
        char name[24];
        std::snprintf(name, sizeof(name), "hour_%02zu.json", h);
        json j = std::holds_alternative<RfModel>(bank.hours[h].impl)
                     ? std::get<RfModel>(bank.hours[h].impl).to_json()
                     : std::get<MlpModel>(bank.hours[h].impl).to_json();
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw std::runtime_error("cannot write bank model file in " + dir);
        out << j.dump() << '\n';
    }
}

SurrogateBank load_bank(const std::string& dir) {
    SurrogateBank bank;
    {
        std::ifstream in(fs::path(dir) / "manifest.json");
        if (!in) throw std::runtime_error("missing bank manifest: " + dir + "/manifest.json");
        in >> bank.manifest;
    }
    bank.kind = model_kind_from_name(bank.manifest.at("kind").get<std::string>());
    bank.seed = bank.manifest.at("seed").get<std::uint64_t>();
    bank.feature_order = bank.manifest.at("feature_order").get<std::vector<std::string>>();
    bank.hours.resize(24);
    for (std::size_t h = 0; h < 24; ++h) {
        char name[24];
        std::snprintf(name, sizeof(name), "hour_%02zu.json", h);
        std::ifstream in(fs::path(dir) / name);
        if (!in) throw std::runtime_error("missing bank model file: " + dir + "/" + name);
        json j;
        in >> j;
        if (j.at("kind") == "rf")
            bank.hours[h].impl = RfModel::from_json(j);
        else
            bank.hours[h].impl = MlpModel::from_json(j);
    }
    return bank;
}

std::vector<QoiSample> SurrogateEvaluator::evaluate(const Trajectory& scenario) const {
    std::vector<QoiSample> out;
    out.reserve(scenario.size());
    for (std::size_t t = 0; t < scenario.size(); ++t) {
        const std::size_t abs_step = start_step_ + t;
        if (abs_step >= kStepsPerDay)
            throw std::runtime_error("scenario extends past the end of the day");
        const std::size_t hour = abs_step / kStepsPerHour;
        out.push_back(bank_->predict(hour, features_of(scenario[t], *system_)));
    }
    return out;
}

}  // namespace gridrisk
