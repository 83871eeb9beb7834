#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridrisk/surrogate_bank.hpp"

namespace gridrisk {

// Validation over a test split, regions decided by the true QoI value.
// NMAE normalizers follow the reporting convention: overall test mean
// for cost and regulating reserve, unsafe-region mean for operating
// reserve and load shed. Unsafe cells are absent when the region is
// empty.
struct QoiValidation {
    double safe_nmae = 0.0;
    std::optional<double> unsafe_nmae;
    double hal_metric = 0.0;  // mean hazard-aware loss, physical units
    double normalizer = 0.0;
    std::size_t safe_rows = 0;
    std::size_t unsafe_rows = 0;
};

struct ValidationReport {
    std::string model_id;
    std::array<QoiValidation, kNumQois> per_qoi;
};

// Per-hour validation of one model on its dataset's test split.
ValidationReport validate_model(const SurrogateModel& model, const Dataset& ds,
                                const std::array<HalParams, kNumQois>& hal,
                                const std::string& model_id);

// Pooled validation of a bank across all 24 hour datasets (the
// table-shaped summary for the whole day).
ValidationReport validate_bank(const SurrogateBank& bank,
                               const std::array<Dataset, 24>& datasets,
                               const std::array<HalParams, kNumQois>& hal);

// Smallest-testing-error selection: mean unsafe-region NMAE over
// operating reserve and load shed, ties by the matching safe-region
// mean, then by position. Returns the index of the chosen report.
std::size_t select_model(const std::vector<ValidationReport>& reports);

// The per-QoI hazard parameters used throughout: no threshold for cost,
// mrr_reg / mrr_op below-direction for the reserves, zero above-direction
// for load shed.
std::array<HalParams, kNumQois> default_qoi_hal(const SystemModel& system);

}  // namespace gridrisk
