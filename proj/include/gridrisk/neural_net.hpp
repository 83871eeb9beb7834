#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridrisk/dataset.hpp"
#include "gridrisk/hal.hpp"

#include "json.hpp"

namespace gridrisk {

enum class NnLossKind : std::uint8_t { MAE, HAL };

struct NnLoss {
    NnLossKind kind = NnLossKind::MAE;
    // Per-QoI HAL parameters, in physical units; the trainer transforms
    // thresholds into standardized target space.
    std::array<HalParams, kNumQois> hal{};
};

struct NnOptions {
    double lr = 1e-3;
    int batch = 256;
    int max_epochs = 200;
    int patience = 20;          // early-stopping epochs without improvement
    double val_fraction = 0.1;  // train slice monitored for early stopping
    std::uint64_t seed = 0;
};

// Feed-forward net F -> 50 (ReLU) -> 30 (leaky) -> 20 (leaky) -> 10 (ReLU)
// -> 4 (linear), trained with adaptive-moment gradient descent on
// standardized features and targets.
class MlpModel {
public:
    std::vector<std::size_t> dims;          // {F, 50, 30, 20, 10, 4}
    std::vector<std::vector<double>> w;     // per layer, [out x in] row-major
    std::vector<std::vector<double>> bias;  // per layer
    std::vector<double> x_mean, x_std;
    std::array<double, kNumQois> y_mean{}, y_std{};

    std::size_t layer_count() const { return w.size(); }

    // Forward pass in standardized space.
    void forward_standardized(const double* x_std_in, double out[kNumQois]) const;

    // Physical-unit prediction (standardizes in, de-standardizes out).
    void predict(const double* x, double out[kNumQois]) const;

    std::vector<double> flatten_params() const;
    void unflatten_params(const std::vector<double>& theta);

    nlohmann::json to_json() const;
    static MlpModel from_json(const nlohmann::json& j);
};

inline constexpr double kLeakySlope = 0.01;

// Loss and full parameter gradient for a batch in standardized space
// (rows of X are standardized features, rows of Y standardized targets;
// HAL thresholds must already be standardized). Batch loss is the mean
// per-row loss: MAE averages |error| over the four outputs, HAL sums the
// per-output hazard-aware terms. Gradient is laid out like
// flatten_params(). Exposed for the finite-difference test harness.
double nn_loss_and_grad(const MlpModel& model, const double* x_std, const double* y_std,
                        std::size_t rows, const NnLoss& loss_std, std::vector<double>* grad);

// HAL parameters re-expressed for standardized targets.
std::array<HalParams, kNumQois> standardize_hal(const std::array<HalParams, kNumQois>& hal,
                                                const std::array<double, kNumQois>& y_mean,
                                                const std::array<double, kNumQois>& y_std);

// Initializes a model with He-normal weights for the given feature count.
MlpModel init_mlp(std::size_t features, std::uint64_t seed);

struct NnTrainStats {
    std::vector<double> train_loss;  // per epoch
    std::vector<double> val_loss;    // per epoch
    int best_epoch = -1;
    int epochs_run = 0;
};

MlpModel train_nn(const Dataset& ds, const NnLoss& loss, const NnOptions& opts,
                  NnTrainStats* stats = nullptr);

}  // namespace gridrisk
