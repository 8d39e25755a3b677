#pragma once

#include <memory>
#include <vector>

#include "coauth/collab.hpp"
#include "coauth/config.hpp"
#include "coauth/features.hpp"
#include "coauth/friendship_network.hpp"
#include "coauth/metrics.hpp"
#include "coauth/q_network.hpp"
#include "coauth/ultimatum.hpp"

namespace coauth {

/// Receives decision points and rewards as they happen inside a run.
class ExperienceSink {
public:
    virtual ~ExperienceSink() = default;
    virtual void on_decision(AgentId agent, std::vector<double> state, Decision d, int action,
                             double weighted_degree) = 0;
    virtual void on_reward(AgentId agent, double reward) = 0;
    virtual void on_step_end(int step) = 0;
};

/// Reward for a published paper, scaled so a top payoff is about 1.
inline double completion_reward(double payoff) { return payoff / 100.0; }
/// Reward every member receives when a paper is destroyed.
inline double destruction_reward(double contrib, double lambda_destr) { return -lambda_destr * contrib; }

struct PolicyHooks {
    const QNetwork* qnet = nullptr;  // required when any agent is strategic
    double epsilon = 0.0;
    ExperienceSink* sink = nullptr;
    bool record_greedy = false;  // also report greedy agents' decisions to the sink
};

/// Strategic tags for a population of `n`, round(fraction * n) of them chosen uniformly.
std::vector<PolicyTag> assign_policies(int n, double fraction, Rng& rng);

/// One run of the model over the configured horizon.
class Simulation {
public:
    /// `policies` empty: assign from cfg.run.strategic_fraction.
    Simulation(const Config& cfg, std::vector<PolicyTag> policies = {}, PolicyHooks hooks = {});
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void step();
    void run();
    bool finished() const { return step_ >= cfg_.population.horizon; }
    int current_step() const { return step_; }

    const Config& config() const { return cfg_; }
    const FriendshipNetwork& network() const { return net_; }
    const std::vector<Agent>& agents() const { return agents_; }
    const std::vector<Paper>& papers() const { return papers_; }
    const std::vector<UltimatumEvent>& events() const { return events_; }
    const std::vector<StepRecord>& timeseries() const { return timeseries_; }

    /// Snapshot of logs in analysis form.
    RunData data() const;

private:
    class Decider;
    friend class Decider;

    void record_step();

    Config cfg_;
    PolicyHooks hooks_;
    FriendshipNetwork net_;
    std::vector<Agent> agents_;
    std::vector<Paper> papers_;
    std::vector<int> active_;
    std::vector<UltimatumEvent> events_;
    std::vector<StepRecord> timeseries_;
    Rng formation_, utilities_, play_, explore_, ego_, stats_;
    PathStrengthCache strengths_;
    ComponentIndex components_;
    bool needs_features_ = false;
    std::unique_ptr<Decider> decider_;
    int step_ = 0;
    int next_paper_id_ = 0;
    long completed_ = 0;
    long terminated_ = 0;
};

}  // namespace coauth
