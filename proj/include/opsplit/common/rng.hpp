#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace opsplit {

/// Mixes a seed with stream identifiers (e.g. path index, step count) into one 64-bit seed.
/// Distinct identifier tuples give statistically unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

/// Caller-owned random stream. Every sampling routine takes one by reference;
/// nothing in the library holds global random state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform on (0, 1], safe for log().
    double uniform_pos() { return 1.0 - uniform(); }

    double normal() { return normal_(engine_); }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    /// Poisson(mean): sequential inversion for mean <= 30, PTRS transformed rejection above.
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t poisson_ptrs(double mean);

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace opsplit
