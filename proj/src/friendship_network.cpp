#include "coauth/friendship_network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace coauth {

namespace {

constexpr double kWeightFloor = 1e-6;

template <typename List>
auto find_edge(List& list, AgentId j) {
    return std::lower_bound(list.begin(), list.end(), j, [](const Edge& e, AgentId id) { return e.to < id; });
}

}  // namespace

FriendshipNetwork::FriendshipNetwork(int n) : adj_(static_cast<std::size_t>(std::max(n, 0))) {}

double FriendshipNetwork::weighted_degree(AgentId i) const {
    double s = 0.0;
    for (const Edge& e : adj_[i]) s += e.weight;
    return s;
}

double FriendshipNetwork::weight(AgentId i, AgentId j) const {
    if (i == j) return 0.0;
    const auto& list = adj_[i];
    auto it = find_edge(list, j);
    return (it != list.end() && it->to == j) ? it->weight : 0.0;
}

void FriendshipNetwork::set_weight(AgentId i, AgentId j, double w) {
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    w = std::min(w, 1.0);
    auto update = [&](AgentId a, AgentId b) -> int {
        auto& list = adj_[a];
        auto it = find_edge(list, b);
        bool present = it != list.end() && it->to == b;
        if (w <= 0.0) {
            if (present) {
                list.erase(it);
                return -1;
            }
            return 0;
        }
        if (present) {
            it->weight = w;
            return 0;
        }
        list.insert(it, Edge{b, w});
        return 1;
    };
    int delta = update(i, j);
    update(j, i);
    if (delta > 0) ++edges_;
    if (delta < 0) --edges_;
    ++version_;
}

std::vector<double> FriendshipNetwork::strengths_from(AgentId source, int max_hops, std::vector<int>* hops_out) const {
    const int n = size();
    std::vector<double> best(n, 0.0);
    std::vector<int> dist(n, -1);
    std::vector<AgentId> queue;
    queue.reserve(n);
    best[source] = 1.0;
    dist[source] = 0;
    queue.push_back(source);
    // BFS layers in order; a node's best product is final once it is dequeued
    // because all its predecessors sit in the previous layer.
    for (std::size_t head = 0; head < queue.size(); ++head) {
        AgentId u = queue[head];
        if (max_hops >= 0 && dist[u] >= max_hops) continue;
        for (const Edge& e : adj_[u]) {
            double cand = best[u] * e.weight;
            if (dist[e.to] < 0) {
                dist[e.to] = dist[u] + 1;
                best[e.to] = cand;
                queue.push_back(e.to);
            } else if (dist[e.to] == dist[u] + 1 && cand > best[e.to]) {
                best[e.to] = cand;
            }
        }
    }
    if (hops_out) *hops_out = std::move(dist);
    return best;
}

std::vector<int> FriendshipNetwork::component_labels() const {
    const int n = size();
    std::vector<int> label(n, -1);
    std::vector<AgentId> stack;
    int next = 0;
    for (AgentId s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            AgentId u = stack.back();
            stack.pop_back();
            for (const Edge& e : adj_[u]) {
                if (label[e.to] < 0) {
                    label[e.to] = next;
                    stack.push_back(e.to);
                }
            }
        }
        ++next;
    }
    return label;
}

double truncated_normal_weight(double mu, double sigma, Rng& rng) {
    double w = std::min(1.0, std::max(0.0, rng.normal(mu, sigma)));
    if (w <= 0.0) w = std::min(1.0, std::max(0.0, rng.normal(mu, sigma)));
    return w <= 0.0 ? kWeightFloor : w;
}

FriendshipNetwork init_network(const PopulationParams& pop, const NetworkParams& params, Rng& rng) {
    const int n = pop.n;
    FriendshipNetwork net(n);
    std::vector<std::pair<AgentId, AgentId>> pairs;
    std::vector<AgentId> others;
    for (AgentId i = 0; i < n; ++i) {
        int want = std::min(rng.poisson(params.lambda_friendship), n - 1);
        if (want <= 0) continue;
        // Partial Fisher-Yates over V \ {i}, drawn lazily through a sparse swap map.
        std::unordered_map<int, int> swapped;
        auto at = [&](int k) {
            auto it = swapped.find(k);
            return it == swapped.end() ? k : it->second;
        };
        const int pool = n - 1;
        for (int k = 0; k < want; ++k) {
            int r = rng.uniform_int(k, pool - 1);
            int pick = at(r);
            swapped[r] = at(k);
            swapped[k] = pick;
            AgentId j = pick < i ? pick : pick + 1;  // skip self
            pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [a, b] : pairs) net.set_weight(a, b, truncated_normal_weight(params.mu_w, params.sigma_w, rng));
    return net;
}

PathStrength path_strength(const FriendshipNetwork& net, AgentId i, AgentId j) {
    if (i == j) throw std::invalid_argument("path_strength requires distinct endpoints");
    std::vector<int> hops;
    auto best = net.strengths_from(i, -1, &hops);
    if (hops[j] < 0) return {};
    return {best[j], hops[j]};
}

const std::vector<double>& PathStrengthCache::from(AgentId source) {
    if (version_ != net_->version()) {
        cache_.clear();
        version_ = net_->version();
    }
    auto it = cache_.find(source);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= max_entries_) cache_.clear();
    return cache_.emplace(source, net_->strengths_from(source)).first->second;
}

MutationSummary apply_success(FriendshipNetwork& net, std::span<const AgentId> clique, const ReputationParams& rep,
                              Rng& rng) {
    MutationSummary s;
    for (std::size_t a = 0; a < clique.size(); ++a) {
        for (std::size_t b = a + 1; b < clique.size(); ++b) {
            double w = net.weight(clique[a], clique[b]);
            if (w > 0.0) {
                net.set_weight(clique[a], clique[b], std::min(1.0, w + rep.delta_success));
                ++s.strengthened;
            } else {
                net.set_weight(clique[a], clique[b], rng.uniform_open_zero());
                ++s.created;
            }
        }
    }
    return s;
}

MutationSummary apply_withdraw(FriendshipNetwork& net, AgentId issuer, std::span<const AgentId> clique,
                               const ReputationParams& rep) {
    MutationSummary s;
    for (AgentId j : clique) {
        if (j == issuer) continue;
        double w = net.weight(issuer, j);
        if (w <= 0.0) continue;
        double nw = std::max(0.0, w - rep.delta_withdraw);
        net.set_weight(issuer, j, nw);
        if (nw <= 0.0) ++s.removed;
        else ++s.weakened;
    }
    return s;
}

double spillover_phi(const ReputationParams& rep, double max_comember_contrib, double d_clique) {
    return (rep.gamma + rep.theta * max_comember_contrib) * std::exp(-rep.alpha * d_clique);
}

MutationSummary apply_destruction(FriendshipNetwork& net, AgentId issuer, std::span<const AgentId> clique,
                                  std::span<const double> contribs, const ReputationParams& rep) {
    if (contribs.size() != clique.size()) throw std::invalid_argument("contribs must cover every clique member");
    MutationSummary s;
    double max_contrib = 0.0;
    for (std::size_t k = 0; k < clique.size(); ++k)
        if (clique[k] != issuer) max_contrib = std::max(max_contrib, contribs[k]);

    auto in_clique = [&](AgentId a) { return std::find(clique.begin(), clique.end(), a) != clique.end(); };

    // Distances are taken on the pre-update graph.
    std::vector<std::vector<double>> from_member;
    from_member.reserve(clique.size());
    for (AgentId m : clique) from_member.push_back(net.strengths_from(m));

    std::vector<Edge> outside;
    for (const Edge& e : net.neighbors(issuer))
        if (!in_clique(e.to)) outside.push_back(e);

    for (AgentId j : clique) {
        if (j == issuer) continue;
        if (net.has_edge(issuer, j)) {
            net.remove_edge(issuer, j);
            ++s.removed;
        }
    }

    for (const Edge& e : outside) {
        double d = 1.0;
        for (const auto& row : from_member) d = std::min(d, row[e.to]);
        double phi = spillover_phi(rep, max_contrib, d);
        double nw = e.weight > rep.epsilon_cut ? (1.0 - phi) * e.weight : 0.0;
        if (nw <= rep.epsilon_cut) {
            net.remove_edge(issuer, e.to);
            ++s.removed;
        } else {
            net.set_weight(issuer, e.to, nw);
            ++s.weakened;
        }
    }
    return s;
}

NetworkStats network_stats(const FriendshipNetwork& net, int path_sources, Rng* rng) {
    NetworkStats st;
    const int n = net.size();
    if (n == 0) return st;

    double closed = 0.0, triples = 0.0;
    for (AgentId v = 0; v < n; ++v) {
        auto nb = net.neighbors(v);
        double d = static_cast<double>(nb.size());
        triples += d * (d - 1.0) / 2.0;
        for (std::size_t a = 0; a < nb.size(); ++a) {
            auto na = net.neighbors(nb[a].to);
            // count neighbors of v after index a that are adjacent to nb[a]
            std::size_t p = 0;
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                AgentId target = nb[b].to;
                while (p < na.size() && na[p].to < target) ++p;
                if (p < na.size() && na[p].to == target) closed += 1.0;
            }
        }
    }
    st.clustering = triples > 0.0 ? closed / triples : 0.0;
    st.density = n > 1 ? 2.0 * static_cast<double>(net.edge_count()) / (static_cast<double>(n) * (n - 1)) : 0.0;
    st.mean_degree = 2.0 * static_cast<double>(net.edge_count()) / n;

    auto labels = net.component_labels();
    st.components = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> sizes(st.components, 0);
    for (int l : labels) ++sizes[l];
    int giant = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    st.giant_size = sizes[giant];

    std::vector<AgentId> members;
    for (AgentId v = 0; v < n; ++v)
        if (labels[v] == giant) members.push_back(v);
    if (members.size() < 2) return st;

    std::vector<AgentId> sources = members;
    if (path_sources > 0 && static_cast<std::size_t>(path_sources) < members.size()) {
        if (!rng) throw std::invalid_argument("sampled path lengths need an rng");
        rng->shuffle(sources);
        sources.resize(static_cast<std::size_t>(path_sources));
    }
    double total = 0.0, pairs = 0.0;
    std::vector<int> dist(n, -1);
    std::vector<AgentId> queue;
    queue.reserve(n);
    for (AgentId s : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        dist[s] = 0;
        queue.push_back(s);
        for (std::size_t h = 0; h < queue.size(); ++h) {
            AgentId u = queue[h];
            for (const Edge& e : net.neighbors(u)) {
                if (dist[e.to] < 0) {
                    dist[e.to] = dist[u] + 1;
                    total += dist[e.to];
                    pairs += 1.0;
                    queue.push_back(e.to);
                }
            }
        }
    }
    st.avg_path_length = pairs > 0.0 ? total / pairs : 0.0;
    return st;
}

void write_edge_list(const FriendshipNetwork& net, std::ostream& out) {
    out << "src,dst,weight\n";
    out << std::setprecision(17);
    for (AgentId i = 0; i < net.size(); ++i)
        for (const Edge& e : net.neighbors(i))
            if (i < e.to) out << i << ',' << e.to << ',' << e.weight << '\n';
}

}  // namespace coauth
