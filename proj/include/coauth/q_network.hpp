#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coauth/config.hpp"
#include "coauth/random.hpp"

namespace coauth {

enum class Decision : std::uint8_t { raise = 0, agree = 1, pull = 2 };

inline constexpr int kDecisionCount = 3;
const char* decision_name(Decision d);

struct LayerSpec {
    std::string name;
    int in = 0;
    int out = 0;
    std::size_t offset = 0;  // weights (out x in, row-major) then biases
    std::size_t size() const { return static_cast<std::size_t>(out) * (in + 1); }
};

struct NetworkDims {
    int paper = 14;
    int agent = 8;
    int network = 5;
    int encoder = 64;
    int hidden = 128;

    int state() const { return paper + agent + network; }
    bool operator==(const NetworkDims&) const = default;
    static NetworkDims from(const DrlParams& p);
};

using QValues = std::array<double, 2>;

/// Three group encoders (two ReLU layers each), a ReLU fusion layer and one
/// linear two-action head per decision type. Parameters live in one flat
/// vector in the order given by layers().
class QNetwork {
public:
    explicit QNetwork(NetworkDims dims = {});

    const NetworkDims& dims() const { return dims_; }
    const std::vector<LayerSpec>& layers() const { return layers_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// He-normal weights, zero biases.
    void init_he(Rng& rng);

    QValues forward(std::span<const double> state, Decision d) const;

    /// Adds d/dtheta of 0.5 * (Q(s,d)[a] - y)^2 into `grad`; returns that loss.
    double accumulate_gradient(std::span<const double> state, Decision d, int action, double target,
                               std::vector<double>& grad) const;

private:
    NetworkDims dims_;
    std::vector<LayerSpec> layers_;
    std::vector<double> params_;
};

/// Adam with bias correction.
class Adam {
public:
    Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void step(std::vector<double>& params, const std::vector<double>& grad);
    long steps() const { return t_; }

private:
    double lr_, b1_, b2_, eps_;
    long t_ = 0;
    std::vector<double> m_, v_;
};

/// Argmax with ties broken toward action 0.
int greedy_action(const QValues& q);

/// Epsilon-greedy action. Always consumes exactly two draws.
int act(const QNetwork& net, std::span<const double> state, Decision d, double epsilon, Rng& rng);

/// y = r + gamma * Q_target(s', argmax_a Q_online(s', a)); y = r when terminal.
double double_dqn_target(double reward, bool terminal, double gamma, const QValues& online_next,
                         const QValues& target_next);

/// max(eps_final, eps0 * decay^episode).
double epsilon_at(int episode, const DrlParams& p);

}  // namespace coauth
