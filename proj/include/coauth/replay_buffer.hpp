#pragma once

#include <span>
#include <vector>

#include "coauth/q_network.hpp"
#include "coauth/random.hpp"

namespace coauth {

struct Transition {
    std::vector<double> state;
    Decision decision = Decision::raise;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    Decision next_decision = Decision::raise;
    bool terminal = false;
};

/// Fixed-capacity ring of transitions with FIFO eviction.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, int state_dim);

    void push(const Transition& t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    long pushes() const { return pushes_; }

    /// Transition at logical index i, 0 = oldest retained.
    Transition at(std::size_t i) const;

    /// `batch` distinct logical indices drawn uniformly.
    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    int dim_;
    std::size_t head_ = 0;  // next slot to write
    std::size_t size_ = 0;
    long pushes_ = 0;
    std::vector<double> states_, next_states_, rewards_;
    std::vector<unsigned char> decisions_, next_decisions_, actions_, terminals_;
};

/// One Double-DQN update on a uniformly sampled batch: mean squared
/// Bellman error on the transitions' own heads. Returns the mean loss.
/// Throws std::logic_error when the buffer holds fewer than `batch` items.
double train_step(QNetwork& online, const QNetwork& target, const ReplayBuffer& buffer, Adam& opt,
                  std::size_t batch, double gamma, Rng& rng);

}  // namespace coauth
