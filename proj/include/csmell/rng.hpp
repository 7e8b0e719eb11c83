#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

// Self-contained deterministic RNG. The standard distributions are
// implementation-defined, which would break the byte-identical-rerun
// contract across toolchains, so sampling is spelled out here.

namespace csmell {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // splitmix64
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n > 0. Rejection-free multiply-shift is biased for
    // huge n; modulo with rejection keeps it exact.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Box-Muller; one value per call, cached pair discarded for determinism
    // under reordering.
    double normal(double mean = 0.0, double sd = 1.0) {
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 <= 0.0) u1 = 5e-324;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(6.283185307179586 * u2);
    }

    bool bernoulli(double p) { return next_double() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derives an independent stream; used to give folds/repetitions/trees
    // their own seeds without coupling draw order.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0x517cc1b727220a95ULL * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace csmell
