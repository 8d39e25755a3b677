#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "coauth/config.hpp"
#include "coauth/q_network.hpp"
#include "coauth/replay_buffer.hpp"
#include "coauth/simulation.hpp"

namespace coauth {

struct EpisodeRow {
    int episode = 0;
    double mean_utility = 0.0;
    long papers_completed = 0;
    long papers_destroyed = 0;
    double completion_rate = 0.0;
    double epsilon = 0.0;
    double strategic_fraction = 0.0;
    double mean_loss = 0.0;
    long updates = 0;
};

/// Greedy agents converted to strategic at the start of each conversion episode.
int conversion_batch(int n, int episodes, const DrlParams& p);

/// Collects semi-Markov transitions per agent and drives learning updates.
class Learner : public ExperienceSink {
public:
    Learner(const Config& cfg, QNetwork& online, std::uint64_t seed);

    void on_decision(AgentId agent, std::vector<double> state, Decision d, int action, double wdeg) override;
    void on_reward(AgentId agent, double reward) override;
    void on_step_end(int step) override;

    /// Emits every open transition as terminal.
    void end_episode();

    const QNetwork& target() const { return target_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    long updates() const { return updates_; }
    double take_mean_loss();

private:
    struct Pending {
        std::vector<double> state;
        Decision decision = Decision::raise;
        int action = 0;
        double reward = 0.0;
        double wdeg = 0.0;
        bool open = false;
    };

    void push(Transition t);

    DrlParams p_;
    QNetwork& online_;
    QNetwork target_;
    Adam adam_;
    ReplayBuffer buffer_;
    Rng rng_;
    std::vector<Pending> pending_;
    long updates_ = 0;
    long sim_steps_ = 0;
    double loss_sum_ = 0.0;
    long loss_count_ = 0;
};

struct TrainingResult {
    QNetwork network;
    std::vector<EpisodeRow> curves;
    std::vector<PolicyTag> final_policies;
};

using EpisodeCallback = std::function<void(const EpisodeRow&, const QNetwork&)>;

/// Full training loop. With `out_dir` set, writes curves.csv, periodic
/// checkpoints checkpoint_epNNN.bin and the final checkpoint.bin.
TrainingResult run_training(const Config& cfg, const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                            const EpisodeCallback& on_episode = {});

void write_curves(const std::vector<EpisodeRow>& rows, std::ostream& out);

}  // namespace coauth
