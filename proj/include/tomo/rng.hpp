#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tomo {

// splitmix64 finalizer; used to derive disjoint child seeds from a master
// seed so parallel tasks never share generator state.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    // Child generator for task `stream`; deterministic and disjoint from both
    // the parent and siblings.
    Rng fork(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

    std::uint64_t seed() const { return seed_; }

    double uniform() { return unit_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    double normal(double mean = 0.0, double stddev = 1.0) {
        return mean + stddev * gauss_(engine_);
    }
    // Laplace with standard deviation `stddev` (scale b = stddev / sqrt(2)).
    double laplace(double stddev) {
        const double b = stddev / std::sqrt(2.0);
        const double u = unit_(engine_) - 0.5;
        return (u < 0.0 ? 1.0 : -1.0) * b * std::log(1.0 - 2.0 * std::abs(u));
    }
    std::uint64_t next_u64() { return engine_(); }
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace tomo
