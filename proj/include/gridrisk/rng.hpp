#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gridrisk {

// Deterministic sampling primitives on top of mt19937_64. The standard
// distribution objects are not pinned across library versions, so every
// draw here is implemented explicitly; identical seeds give identical
// streams on any platform with IEEE doubles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t uniform_index(std::size_t n) {
        // Modulo bias is < 2^-40 for any n used here.
        return static_cast<std::size_t>(engine_() % n);
    }

    // Standard normal via Marsaglia's polar method (one spare cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double mul = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * mul;
        has_spare_ = true;
        return u * mul;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the alpha < 1 boost.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            const double u = uniform01();
            return g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Symmetric Dirichlet of dimension k with concentration alpha.
    std::vector<double> dirichlet(std::size_t k, double alpha) {
        std::vector<double> w(k);
        double sum = 0.0;
        for (auto& wi : w) {
            wi = gamma(alpha);
            sum += wi;
        }
        if (sum <= 0.0) {
            // Numerically impossible for the alphas used here, but keep a
            // defined result for the degenerate all-underflow draw.
            const double uni = 1.0 / static_cast<double>(k);
            for (auto& wi : w) wi = uni;
            return w;
        }
        for (auto& wi : w) wi /= sum;
        return w;
    }

    // Fisher-Yates shuffle of an index vector.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stable derivation of child seeds (SplitMix64 finalizer) so that
// per-scenario / per-hour / per-tree streams are independent of thread
// scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gridrisk
