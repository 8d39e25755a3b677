#pragma once

#include <vector>

#include "coauth/collab.hpp"
#include "coauth/config.hpp"
#include "coauth/friendship_network.hpp"
#include "coauth/random.hpp"

namespace coauth {

inline constexpr int kPaperFeatures = 14;
inline constexpr int kAgentFeatures = 8;
inline constexpr int kNetworkFeatures = 5;
inline constexpr int kStateSize = kPaperFeatures + kAgentFeatures + kNetworkFeatures;

/// Component sizes, refreshed by the caller when convenient.
struct ComponentIndex {
    std::vector<int> label;
    std::vector<int> size;  // per label
    void rebuild(const FriendshipNetwork& net);
    double fraction(AgentId a) const;
};

/// Mean path strength from `a` to a sample of at most `cap` agents within two hops.
double two_hop_strength(const FriendshipNetwork& net, AgentId a, int cap, Rng& rng);

/// 27-slot state of member `k` of `paper`:
///   paper   |K|, |K|/K_max, contrib share, contrib Gini, j, j/|K|, first, last,
///           u0/100, eta, xi, tau/T_m, (T_m - tau)/T_m, demand gain/100
///   agent   log1p of U_past, active, raised, agreed, refused, pulled, insisted, destroyed
///   network log1p degree, log1p weighted degree, mean co-author weight,
///           two-hop strength, component fraction
/// Throws std::invalid_argument when `k` is out of range.
std::vector<double> featurize(const Agent& agent, const Paper& paper, int k, const FriendshipNetwork& net,
                              const ComponentIndex& components, const Config& cfg, Rng& ego_rng);

}  // namespace coauth
