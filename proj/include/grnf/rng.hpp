#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace grnf {

namespace detail {

// SplitMix64 finalizer: a bijective 64-bit mix with excellent avalanche
// behaviour, used both for seed derivation and for seeding derived streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic seed chain: hash(base, a, b, ...). Experiment runners derive
// one seed per work cell from this, so parallel and serial schedules sample
// identical streams.
template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t base, Parts... parts) {
    std::uint64_t h = detail::splitmix64(base);
    ((h = detail::splitmix64(h ^ static_cast<std::uint64_t>(parts))), ...);
    return h;
}

// Seeded random stream with fully pinned-down output sequences. mt19937_64's
// word sequence is fixed by the standard, and the transformations below avoid
// std::uniform_real_distribution / std::normal_distribution, whose draw
// sequences are implementation-defined; results are therefore reproducible
// across compilers and platforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Gaussian via the Marsaglia polar method; the second variate of each
    // accepted pair is cached, so draws stay strictly sequential.
    double normal(double mean = 0.0, double sigma = 1.0) {
        if (has_cached_) {
            has_cached_ = false;
            return mean + sigma * cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return mean + sigma * (u * f);
    }

    // 1 + Poisson(lambda) truncated and renormalized to {1, ..., k_max},
    // drawn by walking the inverse CDF with a single uniform variate.
    int shifted_truncated_poisson(double lambda, int k_max) {
        double term = 1.0;  // lambda^j / j!, the e^{-lambda} factor cancels
        double z = 1.0;
        for (int j = 1; j < k_max; ++j) {
            term *= lambda / static_cast<double>(j);
            z += term;
        }
        const double u = uniform01() * z;
        term = 1.0;
        double cum = term;
        int j = 0;
        while (j + 1 < k_max && u >= cum) {
            ++j;
            term *= lambda / static_cast<double>(j);
            cum += term;
        }
        return 1 + j;
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace grnf
