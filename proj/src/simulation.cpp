#include "coauth/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coauth/greedy_policy.hpp"

namespace coauth {

std::vector<PolicyTag> assign_policies(int n, double fraction, Rng& rng) {
    std::vector<PolicyTag> tags(static_cast<std::size_t>(n), PolicyTag::greedy);
    int m = static_cast<int>(std::lround(fraction * n));
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    for (int i = 0; i < m; ++i) tags[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = PolicyTag::strategic;
    return tags;
}

class Simulation::Decider : public UltimatumDecider {
public:
    explicit Decider(Simulation& w) : w_(w) {}

    bool wants_raise(const Paper& paper, int k, int demand, int) override {
        return decide(paper, k, Decision::raise, [&] { return greedy_raise(paper, k, demand, w_.cfg_.greedy); });
    }
    bool accepts(const Paper& paper, int k, int issuer, int demand, int) override {
        return decide(paper, k, Decision::agree,
                      [&] { return greedy_respond(paper, k, issuer, demand, w_.cfg_.greedy, w_.play_); });
    }
    bool insists(const Paper& paper, int issuer, int demand, int) override {
        return decide(paper, issuer, Decision::pull,
                      [&] { return greedy_insist(paper, issuer, demand, w_.cfg_.greedy, w_.play_); });
    }

private:
    template <typename GreedyRule>
    bool decide(const Paper& paper, int k, Decision d, GreedyRule rule) {
        const Agent& agent = w_.agents_[static_cast<std::size_t>(paper.members[static_cast<std::size_t>(k)])];
        const bool strategic = agent.policy == PolicyTag::strategic;
        const bool report = w_.hooks_.sink && (strategic || w_.hooks_.record_greedy);
        std::vector<double> state;
        if (strategic || report)
            state = featurize(agent, paper, k, w_.net_, w_.components_, w_.cfg_, w_.ego_);
        int action;
        if (strategic) action = act(*w_.hooks_.qnet, state, d, w_.hooks_.epsilon, w_.explore_);
        else action = rule() ? 1 : 0;
        if (report) w_.hooks_.sink->on_decision(agent.id, std::move(state), d, action, w_.net_.weighted_degree(agent.id));
        return action == 1;
    }

    Simulation& w_;
};

Simulation::Simulation(const Config& cfg, std::vector<PolicyTag> policies, PolicyHooks hooks)
    : cfg_(cfg),
      hooks_(hooks),
      formation_(cfg.random_source().derive_stream("clique-formation")),
      utilities_(cfg.random_source().derive_stream("utilities")),
      play_(cfg.random_source().derive_stream("ultimatum-play")),
      explore_(cfg.random_source().derive_stream("policy-exploration", 0)),
      ego_(cfg.random_source().derive_stream("policy-exploration", 1)),
      stats_(cfg.random_source().derive_stream("network-init", 1)),
      strengths_(net_) {
    cfg_.validate();
    const RandomSource src = cfg_.random_source();
    const int n = cfg_.population.n;
    Rng init = src.derive_stream("network-init", 0);
    net_ = init_network(cfg_.population, cfg_.network, init);
    strengths_ = PathStrengthCache(net_);
    if (policies.empty()) {
        Rng assign = src.derive_stream("population-assignment");
        policies = assign_policies(n, cfg_.run.strategic_fraction, assign);
    }
    if (static_cast<int>(policies.size()) != n) throw std::invalid_argument("policy list does not match the population size");
    agents_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Agent& a = agents_[static_cast<std::size_t>(i)];
        a.id = i;
        a.exploration = std::clamp(init.normal(cfg_.network.exploration_mean, cfg_.network.exploration_std), 0.0, 1.0);
        a.policy = policies[static_cast<std::size_t>(i)];
    }
    const bool any_strategic = std::any_of(agents_.begin(), agents_.end(),
                                           [](const Agent& a) { return a.policy == PolicyTag::strategic; });
    if (any_strategic && !hooks_.qnet) throw std::invalid_argument("strategic agents need a Q-network");
    needs_features_ = any_strategic || (hooks_.sink && hooks_.record_greedy);
    decider_ = std::make_unique<Decider>(*this);
}

Simulation::~Simulation() = default;

void Simulation::step() {
    if (finished()) return;
    if (needs_features_) components_.rebuild(net_);

    auto fresh = spawn_papers(step_, agents_, net_, cfg_, strengths_, SpawnStreams{formation_, utilities_},
                              next_paper_id_);
    for (Paper& p : fresh) {
        active_.push_back(static_cast<int>(papers_.size()));
        papers_.push_back(std::move(p));
    }

    std::vector<int> still;
    still.reserve(active_.size());
    for (int idx : active_) {
        Paper& paper = papers_[static_cast<std::size_t>(idx)];
        TickResult r = weekly_tick(paper, step_, agents_, net_, *decider_, cfg_, TickStreams{play_, utilities_});
        if (r.event) events_.push_back(std::move(*r.event));
        if (r.completed) {
            ++completed_;
            if (hooks_.sink)
                for (int k = 0; k < paper.size(); ++k)
                    hooks_.sink->on_reward(paper.members[static_cast<std::size_t>(k)], completion_reward(r.payoffs[static_cast<std::size_t>(k)]));
        } else if (r.terminated) {
            ++terminated_;
            if (hooks_.sink)
                for (int k = 0; k < paper.size(); ++k)
                    hooks_.sink->on_reward(paper.members[static_cast<std::size_t>(k)],
                                           destruction_reward(paper.contrib[static_cast<std::size_t>(k)], cfg_.drl.lambda_destr));
        } else {
            still.push_back(idx);
        }
    }
    active_ = std::move(still);
    record_step();
    if (hooks_.sink) hooks_.sink->on_step_end(step_);
    ++step_;
}

void Simulation::run() {
    while (!finished()) step();
}

void Simulation::record_step() {
    StepRecord rec;
    rec.step = step_;
    rec.spawned = next_paper_id_;
    rec.active = static_cast<long>(active_.size());
    rec.completed = completed_;
    rec.terminated = terminated_;
    std::vector<double> u;
    u.reserve(agents_.size());
    for (const Agent& a : agents_) u.push_back(a.utility_total);
    const double n = static_cast<double>(u.size());
    rec.mean_utility = std::accumulate(u.begin(), u.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : u) ss += (v - rec.mean_utility) * (v - rec.mean_utility);
    rec.utility_std = std::sqrt(ss / n);
    if (std::any_of(u.begin(), u.end(), [](double v) { return v > 0.0; })) rec.gini = gini(u);
    const int every = cfg_.run.stats_interval;
    const bool last = step_ + 1 == cfg_.population.horizon;
    if (every > 0 && (step_ % every == 0 || last))
        rec.network = network_stats(net_, cfg_.run.path_length_sources, &stats_);
    timeseries_.push_back(std::move(rec));
}

RunData Simulation::data() const {
    RunData d;
    d.horizon = cfg_.population.horizon;
    d.strategic_fraction = cfg_.run.strategic_fraction;
    d.events = events_;
    d.timeseries = timeseries_;
    for (const Paper& p : papers_) {
        PaperRow row;
        row.id = p.id;
        row.start_step = p.start_step;
        row.end_step = p.end_step;
        row.duration = p.duration;
        row.size = p.size();
        row.status = p.status;
        row.matured = p.start_step + p.duration <= cfg_.population.horizon;
        row.authors = p.author_list();
        d.papers.push_back(std::move(row));
    }
    long strategic = 0;
    for (const Agent& a : agents_) {
        AgentRow row;
        row.id = a.id;
        row.policy = a.policy;
        row.exploration = a.exploration;
        row.counters = a.counters;
        row.utility = a.utility_total;
        if (a.policy == PolicyTag::strategic) ++strategic;
        d.agents.push_back(row);
    }
    if (!agents_.empty()) d.strategic_fraction = static_cast<double>(strategic) / static_cast<double>(agents_.size());
    return d;
}

}  // namespace coauth
