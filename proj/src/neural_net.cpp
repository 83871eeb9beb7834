#include "gridrisk/neural_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gridrisk/rng.hpp"

namespace gridrisk {

namespace {

enum class Act : std::uint8_t { Relu, Leaky, Linear };

// Hidden activations for the fixed 5-layer architecture.
constexpr Act kActs[5] = {Act::Relu, Act::Leaky, Act::Leaky, Act::Relu, Act::Linear};
constexpr std::size_t kHidden[4] = {50, 30, 20, 10};

double activate(Act a, double z) {
    switch (a) {
        case Act::Relu: return z > 0.0 ? z : 0.0;
        case Act::Leaky: return z > 0.0 ? z : kLeakySlope * z;
        case Act::Linear: return z;
    }
    return z;
}

double activate_grad(Act a, double z) {
    switch (a) {
        case Act::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Act::Leaky: return z > 0.0 ? 1.0 : kLeakySlope;
        case Act::Linear: return 1.0;
    }
    return 1.0;
}

}  // namespace

void MlpModel::forward_standardized(const double* x_std_in, double out[kNumQois]) const {
    std::vector<double> a(x_std_in, x_std_in + dims[0]);
    std::vector<double> z;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        const std::size_t in = dims[l], on = dims[l + 1];
        z.assign(on, 0.0);
        for (std::size_t o = 0; o < on; ++o) {
            const double* wrow = &w[l][o * in];
            double s = bias[l][o];
            for (std::size_t i = 0; i < in; ++i) s += wrow[i] * a[i];
            z[o] = activate(kActs[l], s);
        }
        a = z;
    }
    for (std::size_t k = 0; k < kNumQois; ++k) out[k] = a[k];
}

void MlpModel::predict(const double* x, double out[kNumQois]) const {
    std::vector<double> xs(dims[0]);
    for (std::size_t i = 0; i < dims[0]; ++i) xs[i] = (x[i] - x_mean[i]) / x_std[i];
    forward_standardized(xs.data(), out);
    for (std::size_t k = 0; k < kNumQois; ++k) out[k] = out[k] * y_std[k] + y_mean[k];
}

std::vector<double> MlpModel::flatten_params() const {
    std::vector<double> theta;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        theta.insert(theta.end(), w[l].begin(), w[l].end());
        theta.insert(theta.end(), bias[l].begin(), bias[l].end());
    }
    return theta;
}

void MlpModel::unflatten_params(const std::vector<double>& theta) {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        std::copy_n(theta.begin() + pos, w[l].size(), w[l].begin());
        pos += w[l].size();
        std::copy_n(theta.begin() + pos, bias[l].size(), bias[l].begin());
        pos += bias[l].size();
    }
    if (pos != theta.size()) throw std::runtime_error("parameter vector size mismatch");
}

MlpModel init_mlp(std::size_t features, std::uint64_t seed) {
    MlpModel m;
    m.dims = {features, kHidden[0], kHidden[1], kHidden[2], kHidden[3], kNumQois};
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < m.dims.size(); ++l) {
        const std::size_t in = m.dims[l], on = m.dims[l + 1];
        std::vector<double> wl(on * in);
        const double scale = std::sqrt(2.0 / static_cast<double>(in));
        for (auto& v : wl) v = scale * rng.normal();
        m.w.push_back(std::move(wl));
        m.bias.emplace_back(on, 0.0);
    }
    m.x_mean.assign(features, 0.0);
    m.x_std.assign(features, 1.0);
    m.y_mean.fill(0.0);
    m.y_std.fill(1.0);
    return m;
}

std::array<HalParams, kNumQois> standardize_hal(const std::array<HalParams, kNumQois>& hal,
                                                const std::array<double, kNumQois>& y_mean,
                                                const std::array<double, kNumQois>& y_std) {
    std::array<HalParams, kNumQois> out = hal;
    for (std::size_t k = 0; k < kNumQois; ++k) {
        if (out[k].qbar) out[k].qbar = (*out[k].qbar - y_mean[k]) / y_std[k];
    }
    return out;
}

double nn_loss_and_grad(const MlpModel& model, const double* x_std, const double* y_std,
                        std::size_t rows, const NnLoss& loss_std, std::vector<double>* grad) {
    const std::size_t layers = model.layer_count();
    if (grad) {
        grad->assign(model.flatten_params().size(), 0.0);
    }
    // Per-layer gradient slices into the flat gradient vector.
    std::vector<double*> gw(layers, nullptr), gb(layers, nullptr);
    if (grad) {
        std::size_t pos = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            gw[l] = grad->data() + pos;
            pos += model.w[l].size();
            gb[l] = grad->data() + pos;
            pos += model.bias[l].size();
        }
    }

    std::vector<std::vector<double>> act(layers + 1), pre(layers);
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        act[0].assign(x_std + r * model.dims[0], x_std + (r + 1) * model.dims[0]);
        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t in = model.dims[l], on = model.dims[l + 1];
            pre[l].assign(on, 0.0);
            act[l + 1].assign(on, 0.0);
            for (std::size_t o = 0; o < on; ++o) {
                const double* wrow = &model.w[l][o * in];
                double s = model.bias[l][o];
                const double* a = act[l].data();
                for (std::size_t i = 0; i < in; ++i) s += wrow[i] * a[i];
                pre[l][o] = s;
                act[l + 1][o] = activate(kActs[l], s);
            }
        }

        const double* y = y_std + r * kNumQois;
        std::vector<double> delta(kNumQois, 0.0);
        if (loss_std.kind == NnLossKind::MAE) {
            for (std::size_t k = 0; k < kNumQois; ++k) {
                const double e = act[layers][k] - y[k];
                total += std::fabs(e) / kNumQois;
                delta[k] = (e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0)) / kNumQois;
            }
        } else {
            for (std::size_t k = 0; k < kNumQois; ++k) {
                total += hal_loss(y[k], act[layers][k], loss_std.hal[k]);
                delta[k] = hal_subgradient(y[k], act[layers][k], loss_std.hal[k]);
            }
        }
        if (!grad) continue;

        // Backward pass.
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = model.dims[l], on = model.dims[l + 1];
            // delta currently holds dL/da_{l+1}; fold in the activation.
            for (std::size_t o = 0; o < on; ++o) delta[o] *= activate_grad(kActs[l], pre[l][o]);
            const double* a = act[l].data();
            for (std::size_t o = 0; o < on; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                double* grow = gw[l] + o * in;
                for (std::size_t i = 0; i < in; ++i) grow[i] += d * a[i];
                gb[l][o] += d;
            }
            if (l == 0) break;
            std::vector<double> prev(in, 0.0);
            for (std::size_t o = 0; o < on; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                const double* wrow = &model.w[l][o * in];
                for (std::size_t i = 0; i < in; ++i) prev[i] += d * wrow[i];
            }
            delta = std::move(prev);
        }
    }

    const double inv = 1.0 / static_cast<double>(rows);
    if (grad)
        for (auto& g : *grad) g *= inv;
    return total * inv;
}

MlpModel train_nn(const Dataset& ds, const NnLoss& loss, const NnOptions& opts,
                  NnTrainStats* stats) {
    if (ds.train_idx.empty()) throw std::runtime_error("train split is empty");
    const std::size_t f_count = ds.features;

    MlpModel model = init_mlp(f_count, derive_seed(opts.seed, 0x6d6c70));

    // Standardization statistics from the train split.
    model.x_mean.assign(f_count, 0.0);
    model.x_std.assign(f_count, 0.0);
    model.y_mean.fill(0.0);
    model.y_std.fill(0.0);
    const double n_train = static_cast<double>(ds.train_idx.size());
    for (const std::uint32_t r : ds.train_idx) {
        for (std::size_t i = 0; i < f_count; ++i) model.x_mean[i] += ds.row_x(r)[i];
        for (std::size_t k = 0; k < kNumQois; ++k) model.y_mean[k] += ds.row_y(r)[k];
    }
    for (std::size_t i = 0; i < f_count; ++i) model.x_mean[i] /= n_train;
    for (std::size_t k = 0; k < kNumQois; ++k) model.y_mean[k] /= n_train;
    for (const std::uint32_t r : ds.train_idx) {
        for (std::size_t i = 0; i < f_count; ++i) {
            const double d = ds.row_x(r)[i] - model.x_mean[i];
            model.x_std[i] += d * d;
        }
        for (std::size_t k = 0; k < kNumQois; ++k) {
            const double d = ds.row_y(r)[k] - model.y_mean[k];
            model.y_std[k] += d * d;
        }
    }
    for (std::size_t i = 0; i < f_count; ++i) {
        model.x_std[i] = std::sqrt(model.x_std[i] / n_train);
        if (model.x_std[i] < 1e-9) model.x_std[i] = 1.0;
    }
    for (std::size_t k = 0; k < kNumQois; ++k) {
        model.y_std[k] = std::sqrt(model.y_std[k] / n_train);
        if (model.y_std[k] < 1e-9) model.y_std[k] = 1.0;
    }

    NnLoss loss_std = loss;
    loss_std.hal = standardize_hal(loss.hal, model.y_mean, model.y_std);

    // Pre-standardized training table.
    const std::size_t n = ds.train_idx.size();
    std::vector<double> xs(n * f_count), ys(n * kNumQois);
    for (std::size_t r = 0; r < n; ++r) {
        const double* x = ds.row_x(ds.train_idx[r]);
        const double* y = ds.row_y(ds.train_idx[r]);
        for (std::size_t i = 0; i < f_count; ++i)
            xs[r * f_count + i] = (x[i] - model.x_mean[i]) / model.x_std[i];
        for (std::size_t k = 0; k < kNumQois; ++k)
            ys[r * kNumQois + k] = (y[k] - model.y_mean[k]) / model.y_std[k];
    }

    // Early-stopping slice: a seeded 10% of train rows, never batched.
    Rng split_rng(derive_seed(opts.seed, 0x76616c));
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    split_rng.shuffle(rows);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(opts.val_fraction * static_cast<double>(n)));
    if (n > 1 && n_val == 0) n_val = 1;
    if (n_val >= n) n_val = n - 1;
    const std::vector<std::uint32_t> val_rows(rows.begin(), rows.begin() + n_val);
    std::vector<std::uint32_t> sgd_rows(rows.begin() + n_val, rows.end());

    auto gather = [&](const std::vector<std::uint32_t>& idx, std::vector<double>& bx,
                      std::vector<double>& by) {
        bx.resize(idx.size() * f_count);
        by.resize(idx.size() * kNumQois);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            std::copy_n(&xs[idx[r] * f_count], f_count, &bx[r * f_count]);
            std::copy_n(&ys[idx[r] * kNumQois], kNumQois, &by[r * kNumQois]);
        }
    };
    std::vector<double> val_x, val_y;
    gather(val_rows, val_x, val_y);

    // Adam state.
    std::vector<double> theta = model.flatten_params();
    std::vector<double> m1(theta.size(), 0.0), m2(theta.size(), 0.0), grad;
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::int64_t adam_t = 0;

    Rng batch_rng(derive_seed(opts.seed, 0x626174));
    std::vector<double> best_theta = theta;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;
    std::vector<double> bx, by;

    for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
        batch_rng.shuffle(sgd_rows);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        const std::size_t bsz = std::max(1, opts.batch);
        for (std::size_t start = 0; start < sgd_rows.size(); start += bsz) {
            const std::size_t end = std::min(sgd_rows.size(), start + bsz);
            const std::vector<std::uint32_t> idx(sgd_rows.begin() + start,
                                                 sgd_rows.begin() + end);
            gather(idx, bx, by);
            const double l =
                nn_loss_and_grad(model, bx.data(), by.data(), idx.size(), loss_std, &grad);
            if (!std::isfinite(l))
                throw std::runtime_error("non-finite training loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batches) + " (check scaling)");
            ++adam_t;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
                m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
                theta[i] -= opts.lr * (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + eps);
            }
            model.unflatten_params(theta);
            epoch_loss += l;
            ++batches;
        }
        epoch_loss /= static_cast<double>(std::max<std::size_t>(1, batches));

        const double vl = val_rows.empty()
                              ? epoch_loss
                              : nn_loss_and_grad(model, val_x.data(), val_y.data(),
                                                 val_rows.size(), loss_std, nullptr);
        if (stats) {
            stats->train_loss.push_back(epoch_loss);
            stats->val_loss.push_back(vl);
            stats->epochs_run = epoch + 1;
        }
        if (vl < best_val - 1e-12) {
            best_val = vl;
            best_theta = theta;
            since_best = 0;
            if (stats) stats->best_epoch = epoch;
        } else if (++since_best >= opts.patience) {
            break;
        }
    }
    model.unflatten_params(best_theta);
    return model;
}

nlohmann::json MlpModel::to_json() const {
    nlohmann::json j;
    j["kind"] = "nn";
    j["dims"] = dims;
    j["weights"] = w;
    j["bias"] = bias;
    j["x_mean"] = x_mean;
    j["x_std"] = x_std;
    j["y_mean"] = y_mean;
    j["y_std"] = y_std;
    return j;
}

MlpModel MlpModel::from_json(const nlohmann::json& j) {
    if (j.at("kind") != "nn") throw std::runtime_error("not a neural-net model file");
    MlpModel m;
    m.dims = j.at("dims").get<std::vector<std::size_t>>();
    m.w = j.at("weights").get<std::vector<std::vector<double>>>();
    m.bias = j.at("bias").get<std::vector<std::vector<double>>>();
    m.x_mean = j.at("x_mean").get<std::vector<double>>();
    m.x_std = j.at("x_std").get<std::vector<double>>();
    m.y_mean = j.at("y_mean").get<std::array<double, kNumQois>>();
    m.y_std = j.at("y_std").get<std::array<double, kNumQois>>();
    return m;
}

}  // namespace gridrisk
