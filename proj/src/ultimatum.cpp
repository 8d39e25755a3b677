#include "coauth/ultimatum.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>

#include "coauth/greedy_policy.hpp"

namespace coauth {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::accepted: return "accepted";
        case Outcome::withdrawn: return "withdrawn";
        case Outcome::terminated: return "terminated";
    }
    return "?";
}

double position_utility(double eta, double xi, int j) {
    if (j < 1) throw std::invalid_argument("position must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
    if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
    return (1.0 - eta) / (j + xi);
}

double paper_payoff(double u0, double u1, double t, double rho) { return u0 * u1 / std::pow(1.0 + rho, t); }

double myopic_gain(const Paper& paper, int k, int j_prime) {
    const AuthorTerms& t = paper.terms[static_cast<std::size_t>(k)];
    int j = paper.position_of_member(k);
    return t.u0 * (position_utility(t.eta, t.xi, j_prime) - position_utility(t.eta, t.xi, j));
}

int choose_demand(const Paper& paper, int k, const GreedyParams& greedy) {
    int j = paper.position_of_member(k);
    if (j <= 1) throw std::logic_error("first author has no better position to demand");
    int best = j - 1;
    double best_value = -1.0;
    for (int jp = j - 1; jp >= 1; --jp) {
        double v = predicted_acceptance(paper, k, jp, greedy) * myopic_gain(paper, k, jp);
        if (v > best_value) {  // strict: equal values keep the smaller jump
            best_value = v;
            best = jp;
        }
    }
    return best;
}

void reorder(Paper& paper, int k, int j_prime) {
    int j = paper.position_of_member(k);
    if (j_prime < 1 || j_prime >= j) throw std::logic_error("demanded position must be above the current one");
    auto first = paper.order.begin() + (j_prime - 1);
    auto last = paper.order.begin() + j;
    std::rotate(first, last - 1, last);
}

namespace {

void close_paper(Paper& paper, std::vector<Agent>& agents, PaperStatus status, int step) {
    paper.status = status;
    paper.end_step = step;
    for (AgentId a : paper.members) --agents[static_cast<std::size_t>(a)].active_papers;
}

}  // namespace

TickResult weekly_tick(Paper& paper, int step, std::vector<Agent>& agents, FriendshipNetwork& net,
                       UltimatumDecider& decider, const Config& cfg, TickStreams streams) {
    TickResult res;
    advance_week(paper, cfg.collab.contribution_mode, cfg.collab.dirichlet_concentration, streams.utilities);
    auto agent_of = [&](int k) -> Agent& { return agents[static_cast<std::size_t>(paper.members[static_cast<std::size_t>(k)])]; };

    if (paper.week < paper.duration) {
        std::vector<int> eligible(paper.order.begin() + 1, paper.order.end());
        streams.play.shuffle(eligible);
        int issuer = -1;
        int demand = 0;
        for (int k : eligible) {
            if (!streams.play.bernoulli(cfg.ultimatum.opportunity_rate)) continue;
            int jp = choose_demand(paper, k, cfg.greedy);
            if (decider.wants_raise(paper, k, jp, step)) {
                issuer = k;
                demand = jp;
                break;
            }
        }
        if (issuer < 0) return res;

        UltimatumEvent ev;
        ev.paper_id = paper.id;
        ev.step = step;
        ev.week = paper.week;
        ev.duration = paper.duration;
        ev.issuer = paper.members[static_cast<std::size_t>(issuer)];
        ev.issuer_policy = agent_of(issuer).policy;
        ev.from_pos = paper.position_of_member(issuer);
        ev.to_pos = demand;
        ++agent_of(issuer).counters.raised;

        bool unanimous = true;
        for (int j = 1; j <= paper.size(); ++j) {
            int k = paper.member_at(j);
            if (k == issuer) continue;
            Vote v;
            v.voter = paper.members[static_cast<std::size_t>(k)];
            v.policy = agent_of(k).policy;
            v.position = j;
            v.accept = decider.accepts(paper, k, issuer, demand, step);
            if (v.accept) ++agent_of(k).counters.agreed;
            else ++agent_of(k).counters.refused;
            unanimous = unanimous && v.accept;
            ev.votes.push_back(v);
        }

        if (unanimous) {
            reorder(paper, issuer, demand);
            ev.outcome = Outcome::accepted;
        } else if (decider.insists(paper, issuer, demand, step)) {
            ++agent_of(issuer).counters.insisted;
            ++agent_of(issuer).counters.destroyed;
            ev.outcome = Outcome::terminated;
            apply_destruction(net, ev.issuer, paper.members, paper.contrib, cfg.reputation);
            close_paper(paper, agents, PaperStatus::terminated, step);
            res.terminated = true;
        } else {
            ++agent_of(issuer).counters.pulled;
            ev.outcome = Outcome::withdrawn;
            apply_withdraw(net, ev.issuer, paper.members, cfg.reputation);
        }
        res.event = std::move(ev);
        return res;
    }

    // Scheduled duration reached: publish.
    double t = discount_time(step, cfg.utility.discount_period_steps);
    res.payoffs.resize(paper.members.size());
    for (int k = 0; k < paper.size(); ++k) {
        const AuthorTerms& terms = paper.terms[static_cast<std::size_t>(k)];
        double u1 = position_utility(terms.eta, terms.xi, paper.position_of_member(k));
        double pay = paper_payoff(terms.u0, u1, t, cfg.utility.rho);
        res.payoffs[static_cast<std::size_t>(k)] = pay;
        Agent& a = agent_of(k);
        a.utility_total += pay;
        ++a.counters.completed;
    }
    apply_success(net, paper.members, cfg.reputation, streams.utilities);
    close_paper(paper, agents, PaperStatus::completed, step);
    res.completed = true;
    return res;
}

}  // namespace coauth
