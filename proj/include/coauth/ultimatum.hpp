#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "coauth/collab.hpp"
#include "coauth/config.hpp"
#include "coauth/friendship_network.hpp"

namespace coauth {

enum class Outcome : std::uint8_t { accepted, withdrawn, terminated };

const char* outcome_name(Outcome o);

struct Vote {
    AgentId voter = 0;
    PolicyTag policy = PolicyTag::greedy;
    int position = 0;  // voter's position when the demand was made
    bool accept = true;
};

struct UltimatumEvent {
    int paper_id = 0;
    int step = 0;
    int week = 0;
    int duration = 0;
    AgentId issuer = 0;
    PolicyTag issuer_policy = PolicyTag::greedy;
    int from_pos = 0;
    int to_pos = 0;
    std::vector<Vote> votes;
    Outcome outcome = Outcome::accepted;
};

/// u1(j) = (1 - eta) / (j + xi). Throws std::invalid_argument outside
/// j >= 1, eta in (0,1), xi > 0.
double position_utility(double eta, double xi, int j);

/// u0 * u1 / (1 + rho)^t.
double paper_payoff(double u0, double u1, double t, double rho);

/// Discount exponent for an absolute step when rho is quoted per `period` steps.
inline double discount_time(int step, int period) { return static_cast<double>(step) / period; }

/// u0 * (u1(j') - u1(j)) for member `k` at its current position j.
double myopic_gain(const Paper& paper, int k, int j_prime);

/// Demand maximizing predicted-acceptance times gain; ties go to the
/// smaller jump. Throws std::logic_error when member `k` is already first.
int choose_demand(const Paper& paper, int k, const GreedyParams& greedy);

/// Moves member `k` to position j' and shifts occupants of j'..j-1 down by one.
void reorder(Paper& paper, int k, int j_prime);

/// The three choices an author may face inside one paper-week.
class UltimatumDecider {
public:
    virtual ~UltimatumDecider() = default;
    virtual bool wants_raise(const Paper& paper, int k, int demand, int step) = 0;
    virtual bool accepts(const Paper& paper, int k, int issuer, int demand, int step) = 0;
    virtual bool insists(const Paper& paper, int issuer, int demand, int step) = 0;
};

struct TickStreams {
    Rng& play;
    Rng& utilities;
};

struct TickResult {
    std::optional<UltimatumEvent> event;
    bool completed = false;
    bool terminated = false;
    std::vector<double> payoffs;  // discounted utility per member on completion
};

/// One week of one active paper: contributions, at most one ultimatum, and
/// completion when the scheduled duration is reached.
TickResult weekly_tick(Paper& paper, int step, std::vector<Agent>& agents, FriendshipNetwork& net,
                       UltimatumDecider& decider, const Config& cfg, TickStreams streams);

}  // namespace coauth
