#include "coauth/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coauth {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

double Rng::uniform() {
    // 53 high bits -> [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(engine_);
}

double Rng::normal(double mean, double stddev) {
    if (stddev <= 0.0) return mean;
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
}

double Rng::exponential(double rate) {
    std::exponential_distribution<double> dist(rate);
    return dist(engine_);
}

double Rng::gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
}

int Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(engine_);
}

int Rng::binomial(int trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::binomial_distribution<int> dist(trials, p);
    return dist(engine_);
}

std::size_t Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += std::max(w, 0.0);
    if (!(total > 0.0)) return weights.size();
    double target = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (target < acc) return i;
    }
    return last_positive;  // rounding at the upper edge
}

Rng RandomSource::derive_stream(std::string_view name, std::uint64_t index) const {
    bool known = std::find(std::begin(kStreamNames), std::end(kStreamNames), name) != std::end(kStreamNames);
    if (!known) throw std::invalid_argument("unknown random stream: " + std::string(name));
    std::uint64_t key = splitmix64(seed_ ^ splitmix64(fnv1a(name) + 0x632BE59BD9B4E019ULL * (index + 1)));
    return Rng(key);
}

std::uint64_t RandomSource::child_seed(std::string_view label, std::uint64_t index) const {
    return splitmix64(splitmix64(seed_ + 0xD1B54A32D192ED03ULL) ^ fnv1a(label) ^ splitmix64(index));
}

}  // namespace coauth
