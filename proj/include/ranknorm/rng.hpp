#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ranknorm {

// SplitMix64 finalizer; the mixing step behind seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed splitting: child = H(master, tag_1, ..., tag_k) where H
// chains splitmix64 over the tag words. Every stochastic job in the project
// derives its stream this way (e.g. master_seed, n, rho bits, instance index),
// so reruns and re-partitioned parallel schedules see identical streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t t : tags) {
        h = splitmix64(h ^ t);
    }
    return h;
}

inline std::uint64_t double_bits(double x) {
    return std::bit_cast<std::uint64_t>(x);
}

// Seeded generator handle. Not shared between threads; each parallel job owns
// its own Rng built from a derived seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Child stream derived from the creating seed, independent of this
    // generator's position.
    Rng split(std::uint64_t tag) const { return Rng(derive_seed(seed_, {tag})); }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }  // U(0,1)

    // chi^2_k drawn as gamma(k/2, 2).
    double chi_squared(double dof) {
        std::gamma_distribution<double> gamma(dof / 2.0, 2.0);
        return gamma(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;

    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ranknorm
