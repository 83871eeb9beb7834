#include "gridrisk/validate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridrisk {

std::array<HalParams, kNumQois> default_qoi_hal(const SystemModel& system) {
    std::array<HalParams, kNumQois> hal{};
    // cost: no threshold, safe weights everywhere
    hal[0].qbar.reset();
    hal[1].qbar = 0.0;
    hal[1].direction = Direction::Above;
    hal[2].qbar = system.mrr_reg;
    hal[2].direction = Direction::Below;
    hal[3].qbar = system.mrr_op;
    hal[3].direction = Direction::Below;
    return hal;
}

namespace {

struct Accum {
    double abs_err_safe = 0.0, abs_err_unsafe = 0.0;
    double true_sum_all = 0.0, true_sum_unsafe = 0.0;
    double hal_sum = 0.0;
    std::size_t n_safe = 0, n_unsafe = 0;
};

void accumulate(const SurrogateModel& model, const Dataset& ds,
                const std::array<HalParams, kNumQois>& hal,
                std::array<Accum, kNumQois>& acc) {
    double pred[kNumQois];
    for (const std::uint32_t r : ds.test_idx) {
        model.predict_raw(ds.row_x(r), pred);
        const double* truth = ds.row_y(r);
        for (std::size_t k = 0; k < kNumQois; ++k) {
            const double err = std::fabs(pred[k] - truth[k]);
            const bool unsafe = hal[k].is_unsafe(truth[k]);
            Accum& a = acc[k];
            a.true_sum_all += truth[k];
            a.hal_sum += hal_loss(truth[k], pred[k], hal[k]);
            if (unsafe) {
                a.abs_err_unsafe += err;
                a.true_sum_unsafe += truth[k];
                ++a.n_unsafe;
            } else {
                a.abs_err_safe += err;
                ++a.n_safe;
            }
        }
    }
}

ValidationReport finalize(const std::array<Accum, kNumQois>& acc, const std::string& id) {
    ValidationReport report;
    report.model_id = id;
    for (std::size_t k = 0; k < kNumQois; ++k) {
        const Accum& a = acc[k];
        QoiValidation& v = report.per_qoi[k];
        v.safe_rows = a.n_safe;
        v.unsafe_rows = a.n_unsafe;
        const std::size_t n_all = a.n_safe + a.n_unsafe;
        if (n_all == 0) throw std::runtime_error("test split is empty");
        v.hal_metric = a.hal_sum / static_cast<double>(n_all);

        // Reporting normalizer: unsafe-region mean for op reserve and
        // load shed when that region exists, overall mean otherwise.
        const bool unsafe_normalized = (k == 1 || k == 3) && a.n_unsafe > 0;
        double norm = unsafe_normalized
                          ? a.true_sum_unsafe / static_cast<double>(a.n_unsafe)
                          : a.true_sum_all / static_cast<double>(n_all);
        if (std::fabs(norm) < 1e-9) norm = 1.0;  // degenerate all-zero QoI
        v.normalizer = norm;

        v.safe_nmae = a.n_safe > 0
                          ? (a.abs_err_safe / static_cast<double>(a.n_safe)) / norm
                          : 0.0;
        if (a.n_unsafe > 0)
            v.unsafe_nmae = (a.abs_err_unsafe / static_cast<double>(a.n_unsafe)) / norm;
    }
    return report;
}

}  // namespace

ValidationReport validate_model(const SurrogateModel& model, const Dataset& ds,
                                const std::array<HalParams, kNumQois>& hal,
                                const std::string& model_id) {
    if (ds.test_idx.empty()) throw std::runtime_error("test split is empty");
    std::array<Accum, kNumQois> acc{};
    accumulate(model, ds, hal, acc);
    return finalize(acc, model_id);
}

ValidationReport validate_bank(const SurrogateBank& bank,
                               const std::array<Dataset, 24>& datasets,
                               const std::array<HalParams, kNumQois>& hal) {
    std::array<Accum, kNumQois> acc{};
    for (std::size_t h = 0; h < 24; ++h) accumulate(bank.hours[h], datasets[h], hal, acc);
    return finalize(acc, model_kind_name(bank.kind));
}

std::size_t select_model(const std::vector<ValidationReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("no validation reports to select from");
    auto unsafe_score = [](const ValidationReport& r) {
        // Mean unsafe NMAE over op reserve and load shed. The regions are
        // model-independent, so the cells are present for all models or
        // for none.
        if (!r.per_qoi[1].unsafe_nmae && !r.per_qoi[3].unsafe_nmae)
            return std::numeric_limits<double>::infinity();
        double s = 0.0;
        int n = 0;
        for (std::size_t k : {std::size_t{1}, std::size_t{3}}) {
            if (r.per_qoi[k].unsafe_nmae) {
                s += *r.per_qoi[k].unsafe_nmae;
                ++n;
            }
        }
        return s / n;
    };
    auto safe_score = [](const ValidationReport& r) {
        return 0.5 * (r.per_qoi[1].safe_nmae + r.per_qoi[3].safe_nmae);
    };

    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const double ui = unsafe_score(reports[i]);
        const double ub = unsafe_score(reports[best]);
        if (ui < ub) {
            best = i;
        } else if (ui == ub || (std::isinf(ui) && std::isinf(ub))) {
            if (safe_score(reports[i]) < safe_score(reports[best])) best = i;
            // equal on both criteria keeps the earlier id
        }
    }
    return best;
}

}  // namespace gridrisk
