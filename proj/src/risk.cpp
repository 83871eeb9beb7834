#include "gridrisk/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gridrisk/csv.hpp"

namespace gridrisk {

double qoi_component(const QoiSample& q, std::size_t k) {
    switch (k) {
        case 0: return q.cost;
        case 1: return q.load_shed;
        case 2: return q.reg_reserve;
        case 3: return q.op_reserve;
    }
    throw std::out_of_range("QoI index");
}

QoiMatrix propagate(const Evaluator& evaluator, const ScenarioSet& scenarios,
                    unsigned parallelism) {
    validate_scenario_set(scenarios);
    if (scenarios.provenance == Provenance::Augmented)
        throw std::invalid_argument(
            "augmented scenarios are training-only and cannot enter risk estimation");

    const std::size_t n = scenarios.scenarios.size();
    QoiMatrix matrix;
    matrix.values.assign(n, {});
    matrix.weights = scenarios.weights;

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&](const Evaluator& eval) {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                matrix.values[i] = eval.evaluate(scenarios.scenarios[i]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error)
                    error = std::make_exception_ptr(std::runtime_error(
                        "evaluator failed on scenario " + std::to_string(i) + ": " + e.what()));
                next.store(n);
                return;
            }
        }
    };

    if (parallelism <= 1 || n == 1) {
        work(evaluator);
    } else {
        // Each worker owns its own evaluator instance.
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(parallelism, n));
        std::vector<std::unique_ptr<Evaluator>> clones;
        for (unsigned t = 0; t < workers; ++t) clones.push_back(evaluator.clone());
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&, t] { work(*clones[t]); });
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    const std::size_t steps = matrix.values.front().size();
    for (const auto& row : matrix.values)
        if (row.size() != steps)
            throw std::runtime_error("evaluator returned inconsistent trajectory lengths");
    return matrix;
}

namespace {

void check_samples(const std::vector<double>& samples, const std::vector<double>& weights) {
    if (samples.empty()) throw std::invalid_argument("empty sample vector");
    if (samples.size() != weights.size())
        throw std::invalid_argument("samples/weights size mismatch");
}

bool uniform_weights(const std::vector<double>& weights) {
    for (double w : weights)
        if (w != weights.front()) return false;
    return true;
}

}  // namespace

double level1(const std::vector<double>& samples, const std::vector<double>& weights,
              double alpha, Direction worst) {
    check_samples(samples, weights);
    if (alpha <= 0.0 || alpha > 100.0)
        throw std::invalid_argument("alpha must be in (0, 100]");

    const std::size_t n = samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return worst == Direction::Below ? samples[a] < samples[b] : samples[a] > samples[b];
    });

    if (uniform_weights(weights)) {
        // Nearest-rank rule: the worst ceil(alpha*N/100) order statistics.
        const double exact = alpha * static_cast<double>(n) / 100.0;
        std::size_t k = static_cast<std::size_t>(std::ceil(exact - 1e-9));
        k = std::max<std::size_t>(1, std::min(k, n));
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += samples[order[i]];
        return sum / static_cast<double>(k);
    }
    // Weighted generalization: accumulate tail mass until alpha is
    // covered, the boundary sample included in full.
    const double target = alpha / 100.0;
    double mass = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = order[i];
        mass += weights[idx];
        sum += weights[idx] * samples[idx];
        if (mass >= target - 1e-12) break;
    }
    if (mass <= 0.0) throw std::runtime_error("level1: zero tail mass");
    return sum / mass;
}

double level2(const std::vector<double>& samples, const std::vector<double>& weights,
              double qbar, Direction direction) {
    check_samples(samples, weights);
    double p = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (adverse_value(samples[i], qbar, direction)) p += weights[i];
    return p;
}

double level3(const std::vector<double>& samples, const std::vector<double>& weights,
              const std::function<double(double)>& consequence) {
    check_samples(samples, weights);
    double r = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) r += weights[i] * consequence(samples[i]);
    return r;
}

std::function<double(double)> reserve_shortfall_consequence(double qbar, double voll) {
    return [qbar, voll](double q) { return voll * std::max(qbar - q, 0.0); };
}

std::function<double(double)> load_shed_consequence(double voll) {
    return [voll](double q) { return voll * q; };
}

RiskProfile risk_profile(const QoiMatrix& qoi, const SystemModel& system, double alpha) {
    const std::size_t n = qoi.scenarios();
    const std::size_t steps = qoi.steps();
    if (n == 0) throw std::invalid_argument("empty QoI matrix");

    RiskProfile profile;
    profile.alpha = alpha;
    profile.thresholds = {0.0, 0.0, system.mrr_reg, system.mrr_op};
    profile.steps.resize(steps);

    const auto shed_cons = load_shed_consequence(system.voll);
    const auto reg_cons = reserve_shortfall_consequence(system.mrr_reg, system.voll);
    const auto op_cons = reserve_shortfall_consequence(system.mrr_op, system.voll);

    std::vector<double> buf(n);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t k = 0; k < kNumQois; ++k) {
            for (std::size_t i = 0; i < n; ++i)
                buf[i] = qoi_component(qoi.values[i][t], k);
            RiskCell& cell = profile.steps[t][k];
            switch (k) {
                case 0:  // cost: expensive tail only, no failure mechanism
                    cell.level1 = level1(buf, qoi.weights, alpha, Direction::Above);
                    cell.level2 = 0.0;
                    cell.level3 = 0.0;
                    break;
                case 1:  // load shed
                    cell.level1 = level1(buf, qoi.weights, alpha, Direction::Above);
                    cell.level2 = level2(buf, qoi.weights, 0.0, Direction::Above);
                    cell.level3 = level3(buf, qoi.weights, shed_cons);
                    break;
                case 2:  // regulating reserve
                    cell.level1 = level1(buf, qoi.weights, alpha, Direction::Below);
                    cell.level2 = level2(buf, qoi.weights, system.mrr_reg, Direction::Below);
                    cell.level3 = level3(buf, qoi.weights, reg_cons);
                    break;
                case 3:  // operating reserve
                    cell.level1 = level1(buf, qoi.weights, alpha, Direction::Below);
                    cell.level2 = level2(buf, qoi.weights, system.mrr_op, Direction::Below);
                    cell.level3 = level3(buf, qoi.weights, op_cons);
                    break;
            }
        }
    }
    return profile;
}

void save_risk_profile(const RiskProfile& profile, const std::string& path) {
    CsvWriter w(path);
    w.row({"step", "qoi", "level1", "level2", "level3"});
    for (std::size_t t = 0; t < profile.steps.size(); ++t) {
        for (std::size_t k = 0; k < kNumQois; ++k) {
            const RiskCell& c = profile.steps[t][k];
            w.row({std::to_string(t), kQoiNames[k], fmt_double(c.level1),
                   fmt_double(c.level2), fmt_double(c.level3)});
        }
    }
    w.flush_and_check(path);
}

RiskProfile load_risk_profile(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_step = table.column("step");
    const std::size_t c_qoi = table.column("qoi");
    const std::size_t c1 = table.column("level1");
    const std::size_t c2 = table.column("level2");
    const std::size_t c3 = table.column("level3");

    RiskProfile profile;
    std::size_t max_step = 0;
    for (const auto& row : table.rows)
        max_step = std::max(max_step, static_cast<std::size_t>(std::stoul(row[c_step])));
    profile.steps.resize(max_step + 1);
    for (const auto& row : table.rows) {
        const std::size_t t = std::stoul(row[c_step]);
        std::size_t k = kNumQois;
        for (std::size_t i = 0; i < kNumQois; ++i)
            if (row[c_qoi] == kQoiNames[i]) k = i;
        if (k == kNumQois) throw std::runtime_error("unknown QoI name: " + row[c_qoi]);
        profile.steps[t][k] = {std::stod(row[c1]), std::stod(row[c2]), std::stod(row[c3])};
    }
    return profile;
}

}  // namespace gridrisk
