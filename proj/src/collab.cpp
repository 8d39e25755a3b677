#include "coauth/collab.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coauth {

const char* policy_name(PolicyTag p) { return p == PolicyTag::greedy ? "greedy" : "strategic"; }

const char* status_name(PaperStatus s) {
    switch (s) {
        case PaperStatus::active: return "active";
        case PaperStatus::completed: return "completed";
        case PaperStatus::terminated: return "terminated";
    }
    return "?";
}

int Paper::member_index(AgentId a) const {
    auto it = std::find(members.begin(), members.end(), a);
    return it == members.end() ? -1 : static_cast<int>(it - members.begin());
}

int Paper::position_of_member(int k) const {
    auto it = std::find(order.begin(), order.end(), k);
    return it == order.end() ? -1 : static_cast<int>(it - order.begin()) + 1;
}

std::vector<AgentId> Paper::author_list() const {
    std::vector<AgentId> out;
    out.reserve(order.size());
    for (int k : order) out.push_back(members[static_cast<std::size_t>(k)]);
    return out;
}

double Paper::total_contribution() const { return std::accumulate(contrib.begin(), contrib.end(), 0.0); }

int project_clique_size(int draw, int k_max) { return std::min(std::max(draw, 2), k_max); }

int sample_clique_size(double lambda_k, int k_max, Rng& rng) {
    return project_clique_size(rng.poisson(lambda_k), k_max);
}

Recruitment recruit_clique(AgentId seed, int target_size, const FriendshipNetwork& net,
                           const std::vector<Agent>& agents, int capacity, int budget_factor,
                           PathStrengthCache& strengths, Rng& rng) {
    Recruitment out;
    out.members.push_back(seed);
    std::vector<AgentId> path{seed};
    std::vector<char> taken(agents.size(), 0);
    taken[static_cast<std::size_t>(seed)] = 1;
    auto available = [&](AgentId a) {
        return !taken[static_cast<std::size_t>(a)] && agents[static_cast<std::size_t>(a)].active_papers < capacity;
    };

    int budget = budget_factor * target_size;
    std::vector<AgentId> cand;
    std::vector<double> weight;
    while (static_cast<int>(out.members.size()) < target_size && budget > 0 && !path.empty()) {
        --budget;
        AgentId focal = path.back();
        cand.clear();
        weight.clear();
        bool explore = rng.bernoulli(agents[static_cast<std::size_t>(focal)].exploration);
        if (explore) {
            const auto& d = strengths.from(focal);
            for (AgentId j = 0; j < static_cast<AgentId>(d.size()); ++j) {
                if (j != focal && d[j] > 0.0 && available(j)) {
                    cand.push_back(j);
                    weight.push_back(d[j]);
                }
            }
        } else {
            for (const Edge& e : net.neighbors(focal)) {
                if (available(e.to)) {
                    cand.push_back(e.to);
                    weight.push_back(e.weight);
                }
            }
        }
        if (cand.empty()) {
            path.pop_back();  // backtrack to the previous member
            continue;
        }
        std::size_t pick = rng.categorical(weight);
        AgentId j = cand[pick];
        taken[static_cast<std::size_t>(j)] = 1;
        out.members.push_back(j);
        path.push_back(j);
    }
    if (out.members.size() < 2) {
        out.abandoned = true;
        out.members.clear();
    } else {
        out.truncated = static_cast<int>(out.members.size()) < target_size;
    }
    return out;
}

std::vector<Paper> spawn_papers(int step, std::vector<Agent>& agents, const FriendshipNetwork& net,
                                const Config& cfg, PathStrengthCache& strengths, SpawnStreams streams,
                                int& next_paper_id) {
    std::vector<Paper> out;
    const int capacity = cfg.population.max_concurrent_papers;
    std::vector<AgentId> idle;
    for (const Agent& a : agents)
        if (a.active_papers < capacity) idle.push_back(a.id);
    int attempts = streams.formation.binomial(static_cast<int>(idle.size()), cfg.population.paper_spawn_rate);

    for (int k = 0; k < attempts; ++k) {
        idle.erase(std::remove_if(idle.begin(), idle.end(),
                                  [&](AgentId a) { return agents[static_cast<std::size_t>(a)].active_papers >= capacity; }),
                   idle.end());
        if (idle.empty()) break;
        AgentId seed = idle[static_cast<std::size_t>(streams.formation.uniform_int(0, static_cast<int>(idle.size()) - 1))];
        int target = sample_clique_size(cfg.collab.lambda_k, cfg.collab.k_max, streams.formation);
        Recruitment r = recruit_clique(seed, target, net, agents, capacity, cfg.collab.recruit_budget_factor,
                                       strengths, streams.formation);
        if (r.abandoned) continue;

        Paper p;
        p.id = next_paper_id++;
        p.members = std::move(r.members);
        p.start_step = step;
        p.duration = streams.utilities.uniform_int(cfg.collab.duration_min, cfg.collab.duration_max);
        p.contrib.assign(p.members.size(), 0.0);
        // Expected contributions are equal, so the order falls back to recruitment order (seed first).
        p.order.resize(p.members.size());
        std::iota(p.order.begin(), p.order.end(), 0);
        for (std::size_t m = 0; m < p.members.size(); ++m) {
            AuthorTerms t;
            t.u0 = streams.utilities.uniform(cfg.utility.u0_min, cfg.utility.u0_max);
            t.eta = streams.utilities.uniform(cfg.utility.eta_min, cfg.utility.eta_max);
            t.xi = cfg.utility.xi;
            p.terms.push_back(t);
            Agent& a = agents[static_cast<std::size_t>(p.members[m])];
            ++a.active_papers;
            ++a.counters.participated;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<double> advance_week(Paper& paper, ContributionMode mode, double concentration, Rng& rng) {
    if (paper.status != PaperStatus::active) throw std::logic_error("cannot advance a paper that is not active");
    if (paper.week >= paper.duration) throw std::logic_error("paper already reached its scheduled duration");
    const std::size_t k = paper.members.size();
    std::vector<double> share(k, 1.0 / static_cast<double>(k));
    if (mode == ContributionMode::dirichlet) {
        double total = 0.0;
        for (auto& s : share) {
            s = rng.gamma(concentration);
            total += s;
        }
        for (auto& s : share) s /= total;
    }
    const double per_week = 1.0 / static_cast<double>(paper.duration);
    for (std::size_t m = 0; m < k; ++m) {
        share[m] *= per_week;
        paper.contrib[m] += share[m];
    }
    ++paper.week;
    return share;
}

}  // namespace coauth
