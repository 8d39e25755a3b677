#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "coauth/config.hpp"
#include "coauth/random.hpp"

namespace coauth {

using AgentId = int;

struct Edge {
    AgentId to;
    double weight;
};

/// Strength of the strongest minimum-hop chain between two agents.
struct PathStrength {
    double value = 0.0;  // 0 when disconnected
    int hops = -1;       // -1 when disconnected
};

/// What an update rule did to the graph.
struct MutationSummary {
    int strengthened = 0;
    int created = 0;
    int weakened = 0;
    int removed = 0;
};

/// Weighted undirected friendship graph over agents 0..n-1. Stored weights
/// always lie in (0,1]; an update that drives a weight to the removal
/// threshold deletes the edge. Adjacency lists are kept sorted by neighbor id
/// so iteration order is deterministic.
class FriendshipNetwork {
public:
    explicit FriendshipNetwork(int n = 0);

    int size() const { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const { return edges_; }
    std::span<const Edge> neighbors(AgentId i) const { return adj_[i]; }
    int degree(AgentId i) const { return static_cast<int>(adj_[i].size()); }
    double weighted_degree(AgentId i) const;

    /// 0 when there is no edge.
    double weight(AgentId i, AgentId j) const;
    bool has_edge(AgentId i, AgentId j) const { return weight(i, j) > 0.0; }

    /// Inserts or overwrites; a weight <= 0 removes the edge. Weights above 1 are clamped.
    void set_weight(AgentId i, AgentId j, double w);
    void remove_edge(AgentId i, AgentId j) { set_weight(i, j, 0.0); }

    /// Bumped on every mutation; lets callers invalidate cached queries.
    std::uint64_t version() const { return version_; }

    /// Strongest minimum-hop path strength from `source` to every agent
    /// (0 for unreachable, 1 for the source). `max_hops` < 0 means unbounded.
    std::vector<double> strengths_from(AgentId source, int max_hops = -1,
                                       std::vector<int>* hops_out = nullptr) const;

    /// Component label per agent, labels 0..k-1 in order of first appearance.
    std::vector<int> component_labels() const;

private:
    std::vector<std::vector<Edge>> adj_;
    std::size_t edges_ = 0;
    std::uint64_t version_ = 0;
};

/// Poisson-degree initialization with truncated-normal weights.
FriendshipNetwork init_network(const PopulationParams& pop, const NetworkParams& net, Rng& rng);

/// Draw from N(mu, sigma^2) clamped into (0,1].
double truncated_normal_weight(double mu, double sigma, Rng& rng);

/// Throws std::invalid_argument when i == j.
PathStrength path_strength(const FriendshipNetwork& net, AgentId i, AgentId j);

/// Memoizes single-source strength vectors until the network changes.
class PathStrengthCache {
public:
    explicit PathStrengthCache(const FriendshipNetwork& net, std::size_t max_entries = 512)
        : net_(&net), max_entries_(max_entries) {}

    const std::vector<double>& from(AgentId source);
    double between(AgentId i, AgentId j) { return i == j ? 1.0 : from(i)[j]; }

private:
    const FriendshipNetwork* net_;
    std::size_t max_entries_;
    std::uint64_t version_ = ~0ULL;
    std::unordered_map<AgentId, std::vector<double>> cache_;
};

/// Completed paper: reinforce every clique pair, creating missing ties with U(0,1] weights.
MutationSummary apply_success(FriendshipNetwork& net, std::span<const AgentId> clique,
                              const ReputationParams& rep, Rng& rng);

/// Withdrawn ultimatum: weaken issuer's ties to the other clique members.
MutationSummary apply_withdraw(FriendshipNetwork& net, AgentId issuer, std::span<const AgentId> clique,
                               const ReputationParams& rep);

/// Spillover factor for an outside agent at clique distance `d_clique`.
double spillover_phi(const ReputationParams& rep, double max_comember_contrib, double d_clique);

/// Destroyed paper: sever issuer-clique ties and decay the issuer's outside
/// ties by the spillover factor. `contribs[k]` belongs to `clique[k]`.
MutationSummary apply_destruction(FriendshipNetwork& net, AgentId issuer, std::span<const AgentId> clique,
                                  std::span<const double> contribs, const ReputationParams& rep);

struct NetworkStats {
    double clustering = 0.0;  // global transitivity
    int components = 0;
    double density = 0.0;
    double avg_path_length = 0.0;  // giant component only; 0 for a single node
    double mean_degree = 0.0;
    int giant_size = 0;
};

/// `path_sources` > 0 averages BFS distances from that many sampled giant
/// members instead of every member (rng required then).
NetworkStats network_stats(const FriendshipNetwork& net, int path_sources = 0, Rng* rng = nullptr);

/// Edge list CSV "src,dst,weight" with src < dst in lexicographic order.
void write_edge_list(const FriendshipNetwork& net, std::ostream& out);

}  // namespace coauth
