#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gridrisk/neural_net.hpp"
#include "gridrisk/random_forest.hpp"
#include "gridrisk/risk.hpp"

namespace gridrisk {

enum class ModelKind : std::uint8_t { Rf, NnMae, NnHal };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

// One trained per-hour model of either family.
struct SurrogateModel {
    std::variant<RfModel, MlpModel> impl;

    void predict_raw(const double* x, double out[kNumQois]) const;
    std::size_t features() const;
};

// 24 per-hour models sharing one feature order, plus the training
// manifest. Immutable after training; safe for concurrent prediction.
class SurrogateBank {
public:
    SurrogateBank() = default;
    SurrogateBank(SurrogateBank&& other) noexcept { *this = std::move(other); }
    SurrogateBank& operator=(SurrogateBank&& other) noexcept {
        kind = other.kind;
        hours = std::move(other.hours);
        feature_order = std::move(other.feature_order);
        seed = other.seed;
        manifest = std::move(other.manifest);
        reg_clips_.store(other.reg_clips_.load());
        return *this;
    }

    ModelKind kind = ModelKind::Rf;
    std::vector<SurrogateModel> hours;  // exactly 24
    std::vector<std::string> feature_order;
    std::uint64_t seed = 0;
    nlohmann::json manifest;

    // Physical-unit prediction with the QoI invariants enforced:
    // load_shed clamped at 0, reg clipped into [0, op]. Clips of reg
    // above op are counted.
    QoiSample predict(std::size_t hour, const std::vector<double>& features) const;

    std::uint64_t reg_clip_count() const { return reg_clips_.load(); }

private:
    mutable std::atomic<std::uint64_t> reg_clips_{0};
};

struct JitTrainOptions {
    ModelKind kind = ModelKind::Rf;
    RfParams rf;
    NnOptions nn;
    std::array<HalParams, kNumQois> hal{};  // used by NnHal
    std::uint64_t seed = 0;
    unsigned parallelism = 1;
    // When set, a per-hour failure leaves a constant fallback predictor
    // and is recorded in the manifest instead of aborting the bank.
    bool continue_on_error = false;
};

// Trains the 24 per-hour models (independently seeded, parallelizable)
// and records per-hour training metadata in the manifest.
SurrogateBank jit_train(const std::array<Dataset, 24>& datasets,
                        const std::vector<std::string>& feature_order,
                        const JitTrainOptions& options);

// Directory form: manifest.json plus hour_00.json .. hour_23.json.
void save_bank(const SurrogateBank& bank, const std::string& dir);
SurrogateBank load_bank(const std::string& dir);

// Evaluates scenarios through the bank; `start_step` maps trajectory
// positions onto schedule hours exactly like the oracle does.
class SurrogateEvaluator final : public Evaluator {
public:
    SurrogateEvaluator(const SurrogateBank& bank, const SystemModel& system,
                       std::size_t start_step = 0)
        : bank_(&bank), system_(&system), start_step_(start_step) {}

    std::vector<QoiSample> evaluate(const Trajectory& scenario) const override;
    std::unique_ptr<Evaluator> clone() const override {
        return std::make_unique<SurrogateEvaluator>(*bank_, *system_, start_step_);
    }
    std::string kind() const override { return "surrogate"; }

private:
    const SurrogateBank* bank_;
    const SystemModel* system_;
    std::size_t start_step_;
};

}  // namespace gridrisk
