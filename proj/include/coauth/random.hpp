#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coauth {

/// Seedable pseudo-random stream. Wraps a 64-bit Mersenne Twister and exposes
/// the handful of draws the simulator needs. Streams are single-consumer.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open_zero() { return 1.0 - uniform(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on the closed range [lo, hi].
    int uniform_int(int lo, int hi);
    bool bernoulli(double p) { return uniform() < p; }
    double normal(double mean, double stddev);
    double exponential(double rate);
    double gamma(double shape);
    int poisson(double mean);
    int binomial(int trials, double p);

    /// Index drawn with probability proportional to `weights`. Returns
    /// weights.size() when every weight is zero.
    std::size_t categorical(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i - 1)));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Names of the independent streams a run may derive.
inline constexpr std::string_view kStreamNames[] = {
    "network-init",      "clique-formation",  "utilities",          "policy-exploration",
    "training-sampling", "ultimatum-play",    "population-assignment",
};

/// Root of all randomness for one run. Child streams are keyed by
/// (seed, name, index) so the same triple always replays the same sequence.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Throws std::invalid_argument for names outside kStreamNames.
    Rng derive_stream(std::string_view name, std::uint64_t index = 0) const;

    /// Seed for a nested run (an episode, a sweep composition).
    std::uint64_t child_seed(std::string_view label, std::uint64_t index) const;

private:
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view s);

}  // namespace coauth
