#include "coauth/features.hpp"

#include <cmath>
#include <stdexcept>

#include "coauth/metrics.hpp"
#include "coauth/ultimatum.hpp"

namespace coauth {

void ComponentIndex::rebuild(const FriendshipNetwork& net) {
    label = net.component_labels();
    size.clear();
    for (int l : label) {
        if (l >= static_cast<int>(size.size())) size.resize(static_cast<std::size_t>(l) + 1, 0);
        ++size[static_cast<std::size_t>(l)];
    }
}

double ComponentIndex::fraction(AgentId a) const {
    if (label.empty()) return 0.0;
    return static_cast<double>(size[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])]) / label.size();
}

double two_hop_strength(const FriendshipNetwork& net, AgentId a, int cap, Rng& rng) {
    std::vector<int> hops;
    std::vector<double> d = net.strengths_from(a, 2, &hops);
    std::vector<AgentId> ego;
    for (AgentId j = 0; j < static_cast<AgentId>(d.size()); ++j)
        if (j != a && hops[static_cast<std::size_t>(j)] > 0) ego.push_back(j);
    if (ego.empty()) return 0.0;
    if (static_cast<int>(ego.size()) > cap) {
        for (int i = 0; i < cap; ++i) {
            int pick = rng.uniform_int(i, static_cast<int>(ego.size()) - 1);
            std::swap(ego[static_cast<std::size_t>(i)], ego[static_cast<std::size_t>(pick)]);
        }
        ego.resize(static_cast<std::size_t>(cap));
    }
    double total = 0.0;
    for (AgentId j : ego) total += d[static_cast<std::size_t>(j)];
    return total / ego.size();
}

std::vector<double> featurize(const Agent& agent, const Paper& paper, int k, const FriendshipNetwork& net,
                              const ComponentIndex& components, const Config& cfg, Rng& ego_rng) {
    if (k < 0 || k >= paper.size() || paper.members[static_cast<std::size_t>(k)] != agent.id)
        throw std::invalid_argument("agent is not a member of the paper");
    std::vector<double> s;
    s.reserve(kStateSize);
    const double K = paper.size();
    const int j = paper.position_of_member(k);
    const AuthorTerms& t = paper.terms[static_cast<std::size_t>(k)];
    const double total = paper.total_contribution();

    s.push_back(K);
    s.push_back(K / cfg.collab.k_max);
    s.push_back(total > 0.0 ? paper.contrib[static_cast<std::size_t>(k)] / total : 1.0 / K);
    s.push_back(total > 0.0 ? gini(paper.contrib) : 0.0);
    s.push_back(j);
    s.push_back(j / K);
    s.push_back(j == 1 ? 1.0 : 0.0);
    s.push_back(j == paper.size() ? 1.0 : 0.0);
    s.push_back(t.u0 / 100.0);
    s.push_back(t.eta);
    s.push_back(t.xi);
    s.push_back(static_cast<double>(paper.week) / paper.duration);
    s.push_back(static_cast<double>(paper.duration - paper.week) / paper.duration);
    s.push_back(j > 1 ? myopic_gain(paper, k, choose_demand(paper, k, cfg.greedy)) / 100.0 : 0.0);

    const CareerCounters& c = agent.counters;
    s.push_back(std::log1p(agent.utility_total));
    s.push_back(std::log1p(agent.active_papers));
    for (long v : {c.raised, c.agreed, c.refused, c.pulled, c.insisted, c.destroyed})
        s.push_back(std::log1p(static_cast<double>(v)));

    s.push_back(std::log1p(net.degree(agent.id)));
    s.push_back(std::log1p(net.weighted_degree(agent.id)));
    double wsum = 0.0;
    for (AgentId m : paper.members)
        if (m != agent.id) wsum += net.weight(agent.id, m);
    s.push_back(K > 1 ? wsum / (K - 1) : 0.0);
    s.push_back(two_hop_strength(net, agent.id, cfg.drl.ego_sample_cap, ego_rng));
    s.push_back(components.fraction(agent.id));
    return s;
}

}  // namespace coauth
