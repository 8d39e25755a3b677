#include "coauth/q_network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coauth {

const char* decision_name(Decision d) {
    switch (d) {
        case Decision::raise: return "raise";
        case Decision::agree: return "agree";
        case Decision::pull: return "pull";
    }
    return "?";
}

NetworkDims NetworkDims::from(const DrlParams& p) {
    return NetworkDims{p.paper_dim, p.agent_dim, p.network_dim, p.encoder_dim, p.hidden_dim};
}

namespace {

enum Layer : std::size_t {
    kPaper1, kPaper2, kAgent1, kAgent2, kNet1, kNet2, kTrunk, kHeadRaise, kHeadAgree, kHeadPull,
};

// out = W x + b
void affine(const LayerSpec& L, const double* p, const double* x, double* out) {
    const double* w = p + L.offset;
    const double* b = w + static_cast<std::size_t>(L.out) * L.in;
    for (int o = 0; o < L.out; ++o) {
        double s = b[o];
        const double* row = w + static_cast<std::size_t>(o) * L.in;
        for (int i = 0; i < L.in; ++i) s += row[i] * x[i];
        out[o] = s;
    }
}

void relu(std::vector<double>& v) {
    for (double& x : v) x = x > 0.0 ? x : 0.0;
}

// Given dL/dout, accumulate parameter gradients and (optionally) dL/dx.
void affine_backward(const LayerSpec& L, const double* p, const double* x, const double* dout, double* g,
                     double* dx) {
    const double* w = p + L.offset;
    double* gw = g + L.offset;
    double* gb = gw + static_cast<std::size_t>(L.out) * L.in;
    if (dx) std::fill(dx, dx + L.in, 0.0);
    for (int o = 0; o < L.out; ++o) {
        double d = dout[o];
        if (d == 0.0) continue;
        gb[o] += d;
        const double* row = w + static_cast<std::size_t>(o) * L.in;
        double* grow = gw + static_cast<std::size_t>(o) * L.in;
        for (int i = 0; i < L.in; ++i) {
            grow[i] += d * x[i];
            if (dx) dx[i] += d * row[i];
        }
    }
}

struct Activations {
    // pre-ReLU values are not kept; ReLU masks come from the post values
    std::vector<double> e1[3], e2[3];
    std::vector<double> fused, hidden;
    QValues q{};
};

}  // namespace

QNetwork::QNetwork(NetworkDims dims) : dims_(dims) {
    if (dims.paper <= 0 || dims.agent <= 0 || dims.network <= 0 || dims.encoder <= 0 || dims.hidden <= 0)
        throw std::invalid_argument("network dimensions must be positive");
    const int E = dims.encoder;
    std::vector<std::pair<std::string, std::pair<int, int>>> spec = {
        {"paper_l1", {dims.paper, E}}, {"paper_l2", {E, E}},
        {"agent_l1", {dims.agent, E}}, {"agent_l2", {E, E}},
        {"net_l1", {dims.network, E}}, {"net_l2", {E, E}},
        {"trunk", {3 * E, dims.hidden}},
        {"head_raise", {dims.hidden, 2}}, {"head_agree", {dims.hidden, 2}}, {"head_pull", {dims.hidden, 2}},
    };
    std::size_t off = 0;
    for (auto& [name, io] : spec) {
        LayerSpec L{name, io.first, io.second, off};
        off += L.size();
        layers_.push_back(L);
    }
    params_.assign(off, 0.0);
}

void QNetwork::init_he(Rng& rng) {
    for (const LayerSpec& L : layers_) {
        double sd = std::sqrt(2.0 / L.in);
        std::size_t nw = static_cast<std::size_t>(L.out) * L.in;
        for (std::size_t i = 0; i < nw; ++i) params_[L.offset + i] = rng.normal(0.0, sd);
        for (int o = 0; o < L.out; ++o) params_[L.offset + nw + static_cast<std::size_t>(o)] = 0.0;
    }
}

namespace {

void run_forward(const QNetwork& net, std::span<const double> s, Decision d, Activations& a) {
    const auto& dims = net.dims();
    if (static_cast<int>(s.size()) != dims.state()) throw std::invalid_argument("state has the wrong length");
    const double* p = net.params().data();
    const auto& L = net.layers();
    const int E = dims.encoder;
    const double* inputs[3] = {s.data(), s.data() + dims.paper, s.data() + dims.paper + dims.agent};
    a.fused.assign(static_cast<std::size_t>(3 * E), 0.0);
    for (int g = 0; g < 3; ++g) {
        const LayerSpec& l1 = L[kPaper1 + 2 * g];
        const LayerSpec& l2 = L[kPaper2 + 2 * g];
        a.e1[g].assign(static_cast<std::size_t>(E), 0.0);
        affine(l1, p, inputs[g], a.e1[g].data());
        relu(a.e1[g]);
        a.e2[g].assign(static_cast<std::size_t>(E), 0.0);
        affine(l2, p, a.e1[g].data(), a.e2[g].data());
        relu(a.e2[g]);
        std::copy(a.e2[g].begin(), a.e2[g].end(), a.fused.begin() + g * E);
    }
    a.hidden.assign(static_cast<std::size_t>(dims.hidden), 0.0);
    affine(L[kTrunk], p, a.fused.data(), a.hidden.data());
    relu(a.hidden);
    affine(L[kHeadRaise + static_cast<std::size_t>(d)], p, a.hidden.data(), a.q.data());
}

}  // namespace

QValues QNetwork::forward(std::span<const double> state, Decision d) const {
    Activations a;
    run_forward(*this, state, d, a);
    return a.q;
}

double QNetwork::accumulate_gradient(std::span<const double> state, Decision d, int action, double target,
                                     std::vector<double>& grad) const {
    if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer has the wrong size");
    if (action < 0 || action > 1) throw std::invalid_argument("action must be 0 or 1");
    Activations a;
    run_forward(*this, state, d, a);
    const double err = a.q[static_cast<std::size_t>(action)] - target;
    const double* p = params_.data();
    double* g = grad.data();
    const int E = dims_.encoder;

    QValues dq{0.0, 0.0};
    dq[static_cast<std::size_t>(action)] = err;
    std::vector<double> dh(static_cast<std::size_t>(dims_.hidden));
    affine_backward(layers_[kHeadRaise + static_cast<std::size_t>(d)], p, a.hidden.data(), dq.data(), g, dh.data());
    for (std::size_t i = 0; i < dh.size(); ++i)
        if (a.hidden[i] <= 0.0) dh[i] = 0.0;

    std::vector<double> dfused(static_cast<std::size_t>(3 * E));
    affine_backward(layers_[kTrunk], p, a.fused.data(), dh.data(), g, dfused.data());

    const double* inputs[3] = {state.data(), state.data() + dims_.paper, state.data() + dims_.paper + dims_.agent};
    std::vector<double> de2(static_cast<std::size_t>(E)), de1(static_cast<std::size_t>(E));
    for (int grp = 0; grp < 3; ++grp) {
        for (int i = 0; i < E; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            de2[u] = a.e2[grp][u] > 0.0 ? dfused[static_cast<std::size_t>(grp * E + i)] : 0.0;
        }
        affine_backward(layers_[kPaper2 + 2 * grp], p, a.e1[grp].data(), de2.data(), g, de1.data());
        for (int i = 0; i < E; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            if (a.e1[grp][u] <= 0.0) de1[u] = 0.0;
        }
        affine_backward(layers_[kPaper1 + 2 * grp], p, inputs[grp], de1.data(), g, nullptr);
    }
    return 0.5 * err * err;
}

Adam::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != m_.size() || grad.size() != m_.size())
        throw std::invalid_argument("optimizer state does not match the parameter count");
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
        v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
        double mhat = m_[i] / c1;
        double vhat = v_[i] / c2;
        params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
}

int greedy_action(const QValues& q) { return q[1] > q[0] ? 1 : 0; }

int act(const QNetwork& net, std::span<const double> state, Decision d, double epsilon, Rng& rng) {
    double u = rng.uniform();
    double coin = rng.uniform();
    if (u < epsilon) return coin < 0.5 ? 0 : 1;
    return greedy_action(net.forward(state, d));
}

double double_dqn_target(double reward, bool terminal, double gamma, const QValues& online_next,
                         const QValues& target_next) {
    if (terminal) return reward;
    return reward + gamma * target_next[static_cast<std::size_t>(greedy_action(online_next))];
}

double epsilon_at(int episode, const DrlParams& p) {
    return std::max(p.eps_final, p.eps0 * std::pow(p.eps_decay, episode));
}

}  // namespace coauth
