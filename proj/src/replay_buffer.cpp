#include "coauth/replay_buffer.hpp"

#include <algorithm>
#include <stdexcept>

namespace coauth {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim) : capacity_(capacity), dim_(state_dim) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
    std::size_t cells = capacity * static_cast<std::size_t>(state_dim);
    states_.resize(cells);
    next_states_.resize(cells);
    rewards_.resize(capacity);
    decisions_.resize(capacity);
    next_decisions_.resize(capacity);
    actions_.resize(capacity);
    terminals_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t) {
    if (static_cast<int>(t.state.size()) != dim_ || static_cast<int>(t.next_state.size()) != dim_)
        throw std::invalid_argument("transition state has the wrong length");
    std::size_t off = head_ * static_cast<std::size_t>(dim_);
    std::copy(t.state.begin(), t.state.end(), states_.begin() + static_cast<std::ptrdiff_t>(off));
    std::copy(t.next_state.begin(), t.next_state.end(), next_states_.begin() + static_cast<std::ptrdiff_t>(off));
    rewards_[head_] = t.reward;
    decisions_[head_] = static_cast<unsigned char>(t.decision);
    next_decisions_[head_] = static_cast<unsigned char>(t.next_decision);
    actions_[head_] = static_cast<unsigned char>(t.action);
    terminals_[head_] = t.terminal ? 1 : 0;
    head_ = (head_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
    ++pushes_;
}

Transition ReplayBuffer::at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("replay index out of range");
    std::size_t slot = (head_ + capacity_ - size_ + i) % capacity_;
    std::size_t off = slot * static_cast<std::size_t>(dim_);
    Transition t;
    t.state.assign(states_.begin() + static_cast<std::ptrdiff_t>(off),
                   states_.begin() + static_cast<std::ptrdiff_t>(off + static_cast<std::size_t>(dim_)));
    t.next_state.assign(next_states_.begin() + static_cast<std::ptrdiff_t>(off),
                        next_states_.begin() + static_cast<std::ptrdiff_t>(off + static_cast<std::size_t>(dim_)));
    t.reward = rewards_[slot];
    t.decision = static_cast<Decision>(decisions_[slot]);
    t.next_decision = static_cast<Decision>(next_decisions_[slot]);
    t.action = actions_[slot];
    t.terminal = terminals_[slot] != 0;
    return t;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
    if (batch > size_) throw std::logic_error("replay buffer holds fewer transitions than the batch size");
    // Floyd's algorithm: distinct indices, uniform over subsets.
    std::vector<std::size_t> out;
    out.reserve(batch);
    for (std::size_t j = size_ - batch; j < size_; ++j) {
        auto t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(j)));
        if (std::find(out.begin(), out.end(), t) != out.end()) t = j;
        out.push_back(t);
    }
    return out;
}

double train_step(QNetwork& online, const QNetwork& target, const ReplayBuffer& buffer, Adam& opt,
                  std::size_t batch, double gamma, Rng& rng) {
    auto idx = buffer.sample_indices(batch, rng);
    std::vector<double> grad(online.params().size(), 0.0);
    double loss = 0.0;
    for (std::size_t i : idx) {
        Transition t = buffer.at(i);
        double y = t.reward;
        if (!t.terminal) {
            QValues qo = online.forward(t.next_state, t.next_decision);
            QValues qt = target.forward(t.next_state, t.next_decision);
            y = double_dqn_target(t.reward, false, gamma, qo, qt);
        }
        loss += online.accumulate_gradient(t.state, t.decision, t.action, y, grad);
    }
    const double scale = 1.0 / static_cast<double>(batch);
    for (double& g : grad) g *= scale;
    opt.step(online.params(), grad);
    return loss * scale;
}

}  // namespace coauth
