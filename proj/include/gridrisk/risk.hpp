#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gridrisk/hal.hpp"
#include "gridrisk/sced.hpp"
#include "gridrisk/scenarios.hpp"

namespace gridrisk {

// N x T matrix of QoI samples with per-scenario weights.
struct QoiMatrix {
    std::vector<std::vector<QoiSample>> values;  // [scenario][step]
    std::vector<double> weights;

    std::size_t scenarios() const { return values.size(); }
    std::size_t steps() const { return values.empty() ? 0 : values.front().size(); }
};

double qoi_component(const QoiSample& q, std::size_t k);

// Anything that can turn a scenario into a QoI trajectory: the SCED
// oracle or a trained surrogate bank.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual std::vector<QoiSample> evaluate(const Trajectory& scenario) const = 0;
    virtual std::unique_ptr<Evaluator> clone() const = 0;
    virtual std::string kind() const = 0;
};

// Chains RT-SCEDs over each scenario (forward MC through the dispatch
// chain). With warmup_steps > 0, the chain first settles onto the
// scenario by repeating its opening realization that many times from
// y0; the warm-up dispatches are discarded. This removes the arbitrary
// shared initial state from the recorded QoIs.
class OracleEvaluator final : public Evaluator {
public:
    OracleEvaluator(const SystemModel& system, const CommitmentSchedule& schedule,
                    DispatchState y0, std::size_t start_step = 0,
                    std::size_t warmup_steps = 0)
        : system_(&system),
          schedule_(&schedule),
          y0_(std::move(y0)),
          start_step_(start_step),
          warmup_steps_(warmup_steps) {}

    std::vector<QoiSample> evaluate(const Trajectory& scenario) const override {
        DispatchState start = y0_;
        if (warmup_steps_ > 0 && !scenario.empty()) {
            const Trajectory pre(warmup_steps_, scenario.front());
            std::vector<DispatchState> dispatches;
            simulate_span(*system_, *schedule_, y0_, pre, start_step_, &dispatches);
            start = dispatches.back();
        }
        return simulate_span(*system_, *schedule_, start, scenario, start_step_);
    }
    std::unique_ptr<Evaluator> clone() const override {
        return std::make_unique<OracleEvaluator>(*system_, *schedule_, y0_, start_step_,
                                                 warmup_steps_);
    }
    std::string kind() const override { return "oracle"; }

private:
    const SystemModel* system_;
    const CommitmentSchedule* schedule_;
    DispatchState y0_;
    std::size_t start_step_;
    std::size_t warmup_steps_;
};

// Forward MC propagation: one row per scenario, written into pre-indexed
// slots so any parallel schedule yields the identical matrix. Augmented
// scenario sets are training-only and rejected here.
QoiMatrix propagate(const Evaluator& evaluator, const ScenarioSet& scenarios,
                    unsigned parallelism = 1);

// Tail conditional expectation over the worst alpha% of cases. `worst`
// selects which tail is adverse (Below: small values, i.e. reserves;
// Above: large values, i.e. shed and cost).
double level1(const std::vector<double>& samples, const std::vector<double>& weights,
              double alpha, Direction worst = Direction::Below);

// Probability of the adverse event, strict inequality at the threshold.
double level2(const std::vector<double>& samples, const std::vector<double>& weights,
              double qbar, Direction direction);

// Expected monetary consequence.
double level3(const std::vector<double>& samples, const std::vector<double>& weights,
              const std::function<double(double)>& consequence);

// Built-in consequence functions.
std::function<double(double)> reserve_shortfall_consequence(double qbar, double voll);
std::function<double(double)> load_shed_consequence(double voll);

struct RiskCell {
    double level1 = 0.0;
    double level2 = 0.0;
    double level3 = 0.0;
};

struct RiskProfile {
    std::vector<std::array<RiskCell, kNumQois>> steps;
    double alpha = 5.0;
    // Thresholds used per QoI; cost has none and reports level1 only.
    std::array<double, kNumQois> thresholds{};
};

// Per-step, per-QoI application of the three metric levels.
// Reserves: adverse below mrr; shed: adverse above zero; cost: level1 only.
RiskProfile risk_profile(const QoiMatrix& qoi, const SystemModel& system, double alpha);

// CSV `step,qoi,level1,level2,level3`.
void save_risk_profile(const RiskProfile& profile, const std::string& path);
RiskProfile load_risk_profile(const std::string& path);

}  // namespace gridrisk
