#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coauth/config.hpp"
#include "coauth/friendship_network.hpp"
#include "coauth/random.hpp"

namespace coauth {

enum class PolicyTag : std::uint8_t { greedy, strategic };

const char* policy_name(PolicyTag p);

/// Monotone career counters. `destroyed` counts papers destroyed by this
/// agent's own insistence.
struct CareerCounters {
    long participated = 0;
    long completed = 0;
    long raised = 0;
    long agreed = 0;
    long refused = 0;
    long pulled = 0;
    long insisted = 0;
    long destroyed = 0;
};

struct Agent {
    AgentId id = 0;
    double exploration = 0.0;
    PolicyTag policy = PolicyTag::greedy;
    int active_papers = 0;
    CareerCounters counters;
    double utility_total = 0.0;  // discounted utility of completed papers
};

enum class PaperStatus : std::uint8_t { active, completed, terminated };

const char* status_name(PaperStatus s);

/// Utility terms one author attaches to one paper.
struct AuthorTerms {
    double u0 = 0.0;
    double eta = 0.0;
    double xi = 0.0;
};

/// One collaboration. Members are stored in recruitment order; `order`
/// holds member indices by authorship position (order[0] is first author).
struct Paper {
    int id = 0;
    std::vector<AgentId> members;
    std::vector<AuthorTerms> terms;   // parallel to members
    std::vector<double> contrib;      // parallel to members
    std::vector<int> order;
    int start_step = 0;
    int duration = 0;  // T_m
    int week = 0;      // tau, weeks already worked
    PaperStatus status = PaperStatus::active;
    int end_step = -1;

    int size() const { return static_cast<int>(members.size()); }
    /// Index into members, or -1.
    int member_index(AgentId a) const;
    /// 1-based authorship position of member index k.
    int position_of_member(int k) const;
    int position_of(AgentId a) const { return position_of_member(member_index(a)); }
    /// Member index at 1-based position j.
    int member_at(int j) const { return order[static_cast<std::size_t>(j - 1)]; }
    /// Authors by position.
    std::vector<AgentId> author_list() const;
    double total_contribution() const;
};

/// min(max(X,2), K_max) with X ~ Poisson(lambda_k).
int project_clique_size(int draw, int k_max);
int sample_clique_size(double lambda_k, int k_max, Rng& rng);

/// Result of one recruitment walk; `abandoned` when not even a pair formed.
struct Recruitment {
    std::vector<AgentId> members;
    bool abandoned = false;
    bool truncated = false;
};

/// Exploration/exploitation recruitment walk starting at `seed`.
Recruitment recruit_clique(AgentId seed, int target_size, const FriendshipNetwork& net,
                           const std::vector<Agent>& agents, int capacity, int budget_factor,
                           PathStrengthCache& strengths, Rng& rng);

struct SpawnStreams {
    Rng& formation;
    Rng& utilities;
};

/// Forms this step's new papers and books them onto their members.
std::vector<Paper> spawn_papers(int step, std::vector<Agent>& agents, const FriendshipNetwork& net,
                                const Config& cfg, PathStrengthCache& strengths, SpawnStreams streams,
                                int& next_paper_id);

/// One week of work: each author's share is added to their contribution and
/// tau advances. Shares sum to 1/T_m per week. Throws std::logic_error when
/// the paper is not active or already at T_m.
std::vector<double> advance_week(Paper& paper, ContributionMode mode, double concentration, Rng& rng);

}  // namespace coauth
