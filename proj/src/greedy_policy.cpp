#include "coauth/greedy_policy.hpp"

namespace coauth {

bool is_displaced(const Paper& paper, int k, int issuer, int j_prime) {
    if (k == issuer) return false;
    int j = paper.position_of_member(issuer);
    int p = paper.position_of_member(k);
    return p >= j_prime && p < j;
}

bool greedy_would_accept(const Paper& paper, int k, int issuer, int j_prime, const GreedyParams& g, double z) {
    if (!is_displaced(paper, k, issuer, j_prime)) return true;
    const AuthorTerms& t = paper.terms[static_cast<std::size_t>(k)];
    int p = paper.position_of_member(k);
    double loss = t.u0 * (position_utility(t.eta, t.xi, p) - position_utility(t.eta, t.xi, p + 1));
    double escalation = z * g.p_insist * g.lambda_loss * paper.contrib[static_cast<std::size_t>(k)] * t.u0;
    return loss < escalation;
}

double predicted_acceptance(const Paper& paper, int issuer, int j_prime, const GreedyParams& g) {
    int displaced = 0;
    int yes = 0;
    for (int k = 0; k < paper.size(); ++k) {
        if (!is_displaced(paper, k, issuer, j_prime)) continue;
        ++displaced;
        if (greedy_would_accept(paper, k, issuer, j_prime, g, 1.0)) ++yes;
    }
    if (displaced == 0 || yes == displaced) return 1.0;
    return static_cast<double>(yes) / displaced;
}

bool insist_eligible(const Paper& paper, int issuer, int j_prime, const GreedyParams& g) {
    const AuthorTerms& t = paper.terms[static_cast<std::size_t>(issuer)];
    double current = t.u0 * position_utility(t.eta, t.xi, paper.position_of_member(issuer));
    double sunk = g.lambda_loss * paper.contrib[static_cast<std::size_t>(issuer)] * current;
    return myopic_gain(paper, issuer, j_prime) >= sunk;
}

bool greedy_raise(const Paper& paper, int k, int j_prime, const GreedyParams& g) {
    if (paper.position_of_member(k) <= 1) return false;
    double p = predicted_acceptance(paper, k, j_prime, g);
    double gain = myopic_gain(paper, k, j_prime);
    double loss = 0.0;
    if (insist_eligible(paper, k, j_prime, g)) {
        const AuthorTerms& t = paper.terms[static_cast<std::size_t>(k)];
        loss = g.p_commit * t.u0 * position_utility(t.eta, t.xi, paper.position_of_member(k));
    }
    return p * gain - (1.0 - p) * loss > 0.0;
}

bool greedy_respond(const Paper& paper, int k, int issuer, int j_prime, const GreedyParams& g, Rng& rng) {
    if (!is_displaced(paper, k, issuer, j_prime)) return true;
    return greedy_would_accept(paper, k, issuer, j_prime, g, rng.exponential(1.0));
}

bool greedy_insist(const Paper& paper, int issuer, int j_prime, const GreedyParams& g, Rng& rng) {
    bool committed = rng.uniform() < g.p_commit;
    return committed && insist_eligible(paper, issuer, j_prime, g);
}

}  // namespace coauth
