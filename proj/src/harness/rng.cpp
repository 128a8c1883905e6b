#include "clwe/harness/rng.hpp"

#include "clwe/error.hpp"
#include "clwe/numerics/gaussian.hpp"

namespace clwe {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream)
    : master_(master_seed), stream_(stream), engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream))) {}

Rng Rng::split(std::uint64_t index) const {
    return Rng(master_, splitmix64(stream_ + 0x632be59bd9b4e019ULL) ^ index);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(engine_); }

double Rng::gaussian(double s) { return normal() * numerics::width_to_stddev(s); }

bool Rng::bernoulli(double p) { return uniform() < p; }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("Rng::below: empty range");
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

}  // namespace clwe
