#pragma once

#include "coauth/collab.hpp"
#include "coauth/config.hpp"
#include "coauth/random.hpp"
#include "coauth/ultimatum.hpp"

namespace coauth {

/// Whether the demand (issuer -> j') pushes member `k` down one position.
bool is_displaced(const Paper& paper, int k, int issuer, int j_prime);

/// Responder rule with perceived-threat multiplier `z`: a displaced author
/// accepts when the positional loss is below the expected escalation loss.
bool greedy_would_accept(const Paper& paper, int k, int issuer, int j_prime, const GreedyParams& g,
                         double z);

/// Issuer's forecast of acceptance using z = 1 for every responder: 1 when
/// all would accept, otherwise the accepting fraction of displaced authors.
double predicted_acceptance(const Paper& paper, int issuer, int j_prime, const GreedyParams& g);

/// Whether the issuer would insist after a refusal, ignoring the commitment draw.
bool insist_eligible(const Paper& paper, int issuer, int j_prime, const GreedyParams& g);

bool greedy_raise(const Paper& paper, int k, int j_prime, const GreedyParams& g);
bool greedy_respond(const Paper& paper, int k, int issuer, int j_prime, const GreedyParams& g, Rng& rng);
bool greedy_insist(const Paper& paper, int issuer, int j_prime, const GreedyParams& g, Rng& rng);

class GreedyDecider : public UltimatumDecider {
public:
    GreedyDecider(const GreedyParams& g, Rng& rng) : g_(g), rng_(rng) {}
    bool wants_raise(const Paper& paper, int k, int demand, int) override {
        return greedy_raise(paper, k, demand, g_);
    }
    bool accepts(const Paper& paper, int k, int issuer, int demand, int) override {
        return greedy_respond(paper, k, issuer, demand, g_, rng_);
    }
    bool insists(const Paper& paper, int issuer, int demand, int) override {
        return greedy_insist(paper, issuer, demand, g_, rng_);
    }

private:
    GreedyParams g_;
    Rng& rng_;
};

}  // namespace coauth
