#pragma once

#include <cstdint>
#include <random>

namespace clwe {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seeded generator. Streams derived from the same master seed with distinct
// indices are independent for all practical purposes and reproducible
// bit-for-bit.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t master_seed, std::uint64_t stream = 0);

    // Child stream; does not advance this generator.
    Rng split(std::uint64_t index) const;

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream() const { return stream_; }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal N(0, 1).
    double normal();
    // Continuous Gaussian of width s: rho_s density, variance s^2/(2 pi).
    double gaussian(double s);
    bool bernoulli(double p);
    std::uint64_t below(std::uint64_t bound);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t master_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace clwe
