#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numeric>

#include "coauth/checkpoint.hpp"
#include "coauth/features.hpp"
#include "coauth/replay_buffer.hpp"
#include "coauth/simulation.hpp"
#include "coauth/trainer.hpp"
#include "coauth/ultimatum.hpp"
#include "oracles.hpp"

using namespace coauth;

namespace {

std::vector<double> random_state(Rng& rng, int dim = kStateSize) {
    std::vector<double> s(static_cast<std::size_t>(dim));
    for (double& x : s) x = rng.normal(0.0, 1.0);
    return s;
}

// Sets a network so that head `d` returns exactly (q0, q1): all weights zero,
// head biases carry the values.
QNetwork constant_net(Decision d, double q0, double q1) {
    QNetwork net;
    std::fill(net.params().begin(), net.params().end(), 0.0);
    for (const auto& L : net.layers()) {
        if (L.name != std::string("head_") + decision_name(d)) continue;
        std::size_t bias = L.offset + static_cast<std::size_t>(L.out) * L.in;
        net.params()[bias] = q0;
        net.params()[bias + 1] = q1;
    }
    return net;
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("feature layout for a first author and a fresh agent") {
    Config cfg;
    FriendshipNetwork net(3);
    net.set_weight(0, 1, 0.4);
    ComponentIndex comp;
    comp.rebuild(net);
    Paper p;
    p.members = {0, 1, 2};
    p.terms = {{50, 0.6, 0.1}, {70, 0.7, 0.1}, {90, 0.55, 0.1}};
    p.contrib = {0.0, 0.0, 0.0};
    p.order = {0, 1, 2};
    p.duration = 10;
    Agent a;
    a.id = 0;
    Rng ego(1);
    auto s = featurize(a, p, 0, net, comp, cfg, ego);
    REQUIRE(s.size() == kStateSize);
    CHECK(s[0] == 3.0);
    CHECK(s[1] == doctest::Approx(3.0 / 8.0));
    CHECK(s[2] == doctest::Approx(1.0 / 3.0));
    CHECK(s[4] == 1.0);
    CHECK(s[6] == 1.0);
    CHECK(s[7] == 0.0);
    CHECK(s[8] == doctest::Approx(0.5));
    CHECK(s[11] == 0.0);
    CHECK(s[12] == 1.0);
    CHECK(s[13] == 0.0);
    for (int i = kPaperFeatures; i < kPaperFeatures + kAgentFeatures; ++i) CHECK(s[static_cast<std::size_t>(i)] == 0.0);
    CHECK(s[22] == doctest::Approx(std::log1p(1.0)));
    CHECK(s[24] == doctest::Approx(0.2));  // 0.4 to one of two co-authors
    CHECK(s[26] == doctest::Approx(2.0 / 3.0));

    auto last = featurize(Agent{2}, p, 2, net, comp, cfg, ego);
    CHECK(last[6] == 0.0);
    CHECK(last[7] == 1.0);
    CHECK_THROWS_AS(featurize(a, p, 1, net, comp, cfg, ego), std::invalid_argument);
}

TEST_CASE("demand-gain slot agrees with a direct recomputation") {
    Config cfg;
    Rng rng(4);
    FriendshipNetwork net(9);
    ComponentIndex comp;
    comp.rebuild(net);
    for (int t = 0; t < 100; ++t) {
        Paper p;
        int K = rng.uniform_int(2, 8);
        for (int i = 0; i < K; ++i) {
            p.members.push_back(i);
            p.terms.push_back({rng.uniform(10, 100), rng.uniform(0.5, 0.8), 0.1});
        }
        p.duration = rng.uniform_int(8, 88);
        p.week = rng.uniform_int(0, p.duration - 1);
        for (int i = 0; i < K; ++i) p.contrib.push_back(rng.uniform(0.0, 0.1));
        p.order.resize(static_cast<std::size_t>(K));
        std::iota(p.order.begin(), p.order.end(), 0);
        rng.shuffle(p.order);
        int k = rng.uniform_int(0, K - 1);
        Agent a;
        a.id = k;
        auto s = featurize(a, p, k, net, comp, cfg, rng);
        int j = p.position_of_member(k);
        double expected = 0.0;
        if (j > 1) {
            const auto& tm = p.terms[static_cast<std::size_t>(k)];
            int jp = choose_demand(p, k, cfg.greedy);
            expected = tm.u0 * ((1 - tm.eta) / (jp + tm.xi) - (1 - tm.eta) / (j + tm.xi)) / 100.0;
        }
        CHECK(s[13] == doctest::Approx(expected));
        CHECK(s[4] == j);
    }
}

TEST_CASE("two-hop strength averages the sampled ego network") {
    FriendshipNetwork net(4);
    net.set_weight(0, 1, 0.5);
    net.set_weight(1, 2, 0.4);
    net.set_weight(2, 3, 0.9);
    Rng rng(1);
    CHECK(two_hop_strength(net, 0, 50, rng) == doctest::Approx((0.5 + 0.2) / 2));
    FriendshipNetwork lonely(2);
    CHECK(two_hop_strength(lonely, 0, 50, rng) == 0.0);
}

TEST_CASE("zero network outputs zeros") {
    QNetwork net;
    std::fill(net.params().begin(), net.params().end(), 0.0);
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        auto s = random_state(rng);
        for (Decision d : {Decision::raise, Decision::agree, Decision::pull}) {
            auto q = net.forward(s, d);
            CHECK(q[0] == 0.0);
            CHECK(q[1] == 0.0);
        }
    }
}

TEST_CASE("forward pass is deterministic and head-specific") {
    QNetwork net;
    Rng rng(3);
    net.init_he(rng);
    auto s = random_state(rng);
    auto a = net.forward(s, Decision::agree);
    auto b = net.forward(s, Decision::agree);
    CHECK(a == b);
    CHECK(net.forward(s, Decision::raise) != a);
}

TEST_CASE("layer layout covers the flat parameter vector") {
    QNetwork net;
    std::size_t expected = 0;
    for (const auto& L : net.layers()) {
        CHECK(L.offset == expected);
        expected += L.size();
    }
    CHECK(expected == net.params().size());
    // 14/8/5 -> 64 -> 64 encoders, 192 -> 128 trunk, three 128 -> 2 heads
    std::size_t count = (14 * 64 + 64) + (8 * 64 + 64) + (5 * 64 + 64) + 3 * (64 * 64 + 64) + (192 * 128 + 128) +
                        3 * (128 * 2 + 2);
    CHECK(net.params().size() == count);
}

TEST_CASE("analytic gradient matches central differences") {
    auto r = oracle::gradient_check(20, 48, 5);
    CHECK(r.draws == 20);
    CHECK(r.worst < 1e-4);
}

TEST_CASE("epsilon-greedy action selection") {
    Rng rng(6);
    std::vector<double> s(kStateSize, 0.0);
    auto up = constant_net(Decision::raise, 1.0, 2.0);
    auto tie = constant_net(Decision::raise, 0.7, 0.7);
    CHECK(act(up, s, Decision::raise, 0.0, rng) == 1);
    CHECK(act(tie, s, Decision::raise, 0.0, rng) == 0);
    CHECK(greedy_action({1.0, 2.0}) == 1);
    CHECK(greedy_action({0.7, 0.7}) == 0);
    int ones = 0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) ones += act(up, s, Decision::raise, 1.0, rng);
    CHECK(static_cast<double>(ones) / reps == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("act consumes a fixed number of draws") {
    auto net = constant_net(Decision::pull, 0.0, 1.0);
    std::vector<double> s(kStateSize, 0.0);
    Rng a(9), b(9);
    act(net, s, Decision::pull, 0.0, a);
    act(net, s, Decision::pull, 1.0, b);
    CHECK(a() == b());
}

TEST_CASE("rewards") {
    CHECK(completion_reward(paper_payoff(100.0, 0.5, 0.0, 0.05)) == doctest::Approx(0.5));
    CHECK(destruction_reward(0.3, 1.0) == doctest::Approx(-0.3));
}

TEST_CASE("double dqn target") {
    CHECK(double_dqn_target(1.0, false, 0.99, {0.1, 0.9}, {5.0, 2.0}) == doctest::Approx(2.98));
    CHECK(double_dqn_target(-0.3, true, 0.99, {0.1, 0.9}, {5.0, 2.0}) == doctest::Approx(-0.3));
    // ties in the online net pick action 0
    CHECK(double_dqn_target(0.0, false, 0.5, {1.0, 1.0}, {4.0, 8.0}) == doctest::Approx(2.0));
}

TEST_CASE("epsilon schedule") {
    DrlParams p;
    CHECK(epsilon_at(0, p) == 1.0);
    CHECK(epsilon_at(100, p) == doctest::Approx(std::pow(0.9825, 100)));
    CHECK(epsilon_at(100, p) == doctest::Approx(0.171).epsilon(0.01));
    CHECK(epsilon_at(10000, p) == 0.01);
}

TEST_CASE("replay buffer is a FIFO ring") {
    ReplayBuffer buf(3, 2);
    for (int i = 0; i < 5; ++i) {
        Transition t;
        t.state = {double(i), 0.0};
        t.next_state = {double(i) + 1, 0.0};
        t.reward = i;
        t.action = i % 2;
        t.decision = static_cast<Decision>(i % 3);
        t.terminal = i == 4;
        buf.push(t);
        CHECK(buf.size() == std::min<std::size_t>(i + 1, 3));
    }
    CHECK(buf.pushes() == 5);
    CHECK(buf.at(0).reward == 2.0);
    CHECK(buf.at(2).reward == 4.0);
    CHECK(buf.at(2).terminal);
    CHECK(buf.at(1).decision == Decision::raise);
    CHECK(buf.at(1).next_state[0] == 4.0);

    Rng rng(1);
    auto idx = buf.sample_indices(3, rng);
    std::sort(idx.begin(), idx.end());
    CHECK(idx == std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS_AS(buf.sample_indices(4, rng), std::logic_error);
}

TEST_CASE("property: sampled indices are distinct and roughly uniform") {
    ReplayBuffer buf(50, 1);
    for (int i = 0; i < 50; ++i) {
        Transition t;
        t.state = {0.0};
        t.next_state = {0.0};
        buf.push(t);
    }
    Rng rng(2);
    std::vector<int> hits(50, 0);
    for (int r = 0; r < 4000; ++r) {
        auto idx = buf.sample_indices(10, rng);
        std::sort(idx.begin(), idx.end());
        REQUIRE(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
        for (auto i : idx) ++hits[i];
    }
    for (int h : hits) CHECK(h == doctest::Approx(800).epsilon(0.15));
}

TEST_CASE("single-transition regression converges to its target") {
    QNetwork online;
    Rng rng(7);
    online.init_he(rng);
    QNetwork target = online;
    ReplayBuffer buf(10, kStateSize);
    Transition t;
    t.state = random_state(rng);
    t.next_state = random_state(rng);
    t.decision = Decision::agree;
    t.action = 1;
    t.reward = -0.3;
    t.terminal = true;
    buf.push(t);
    Adam adam(online.params().size(), 1e-3);
    double loss = 0.0;
    for (int i = 0; i < 500; ++i) loss = train_step(online, target, buf, adam, 1, 0.99, rng);
    CHECK(loss < 1e-6);
    CHECK(online.forward(t.state, Decision::agree)[1] == doctest::Approx(-0.3).epsilon(1e-3).scale(1.0));
    // the other head is untouched by this transition's gradient
    CHECK(online.forward(t.state, Decision::raise) != QValues{});
}

TEST_CASE("learner stitches semi-Markov transitions per agent") {
    Config cfg;
    cfg.population.n = 4;
    cfg.drl.batch_size = 1000;  // never train here
    QNetwork net;
    Learner learner(cfg, net, 1);
    std::vector<double> s1(kStateSize, 1.0), s2(kStateSize, 2.0), s3(kStateSize, 3.0);

    learner.on_reward(0, 5.0);  // before any decision: dropped
    learner.on_decision(0, s1, Decision::raise, 1, 0.0);
    learner.on_decision(1, s3, Decision::agree, 0, 0.0);
    learner.on_reward(0, 0.25);
    learner.on_reward(0, 0.25);
    learner.on_decision(0, s2, Decision::pull, 0, 0.0);
    REQUIRE(learner.buffer().size() == 1);
    auto t = learner.buffer().at(0);
    CHECK(t.state[0] == 1.0);
    CHECK(t.next_state[0] == 2.0);
    CHECK(t.reward == 0.5);
    CHECK(t.decision == Decision::raise);
    CHECK(t.next_decision == Decision::pull);
    CHECK_FALSE(t.terminal);

    learner.on_reward(1, -0.3);
    learner.end_episode();
    REQUIRE(learner.buffer().size() == 3);
    for (std::size_t i = 1; i < 3; ++i) CHECK(learner.buffer().at(i).terminal);
    CHECK(learner.buffer().at(1).reward + learner.buffer().at(2).reward == doctest::Approx(-0.3));
}

TEST_CASE("conversion schedule") {
    DrlParams p;
    CHECK(conversion_batch(10000, 500, p) == 200);
    CHECK(conversion_batch(200, 50, p) == 40);
}

TEST_CASE("checkpoint round trip and validation") {
    QNetwork net;
    Rng rng(8);
    net.init_he(rng);
    auto path = tmp("coauth_ckpt.bin");
    save_checkpoint(net, path);
    QNetwork back = load_checkpoint(path);
    auto s = random_state(rng);
    for (Decision d : {Decision::raise, Decision::agree, Decision::pull}) CHECK(back.forward(s, d) == net.forward(s, d));
    CHECK(back.params() == net.params());

    NetworkDims wide;
    wide.hidden = 64;
    try {
        load_checkpoint(path, wide);
        FAIL("expected dims error");
    } catch (const CheckpointError& e) {
        CHECK(e.kind() == CheckpointError::Kind::dims);
    }

    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
    }
    try {
        load_checkpoint(path);
        FAIL("expected version error");
    } catch (const CheckpointError& e) {
        CHECK(e.kind() == CheckpointError::Kind::version);
    }
    try {
        load_checkpoint(tmp("coauth_missing_ckpt.bin"));
        FAIL("expected io error");
    } catch (const CheckpointError& e) {
        CHECK(e.kind() == CheckpointError::Kind::io);
    }
}

TEST_CASE("strategic agents require a network") {
    Config cfg = preset("desk-eval");
    cfg.population.n = 50;
    cfg.population.horizon = 5;
    cfg.run.strategic_fraction = 0.5;
    CHECK_THROWS(Simulation(cfg));
}

TEST_CASE("property: simulation reward stream matches completions and terminations") {
    struct Tally : ExperienceSink {
        std::vector<int> decided;
        double positive = 0.0, negative = 0.0;
        long rewards = 0;
        void on_decision(AgentId a, std::vector<double> s, Decision, int, double) override {
            REQUIRE(s.size() == kStateSize);
            decided.push_back(a);
        }
        void on_reward(AgentId, double r) override {
            ++rewards;
            (r >= 0 ? positive : negative) += r;
        }
        void on_step_end(int) override {}
    } tally;

    Config cfg = preset("desk-eval");
    cfg.population.n = 150;
    cfg.population.horizon = 120;
    cfg.population.paper_spawn_rate = 0.02;
    cfg.run.strategic_fraction = 0.5;
    QNetwork q;
    Rng rng(3);
    q.init_he(rng);
    PolicyHooks hooks;
    hooks.qnet = &q;
    hooks.epsilon = 0.3;
    hooks.sink = &tally;
    Simulation sim(cfg, {}, hooks);
    sim.run();
    double expected_pos = 0.0, expected_neg = 0.0;
    long members = 0;
    for (const auto& p : sim.papers()) {
        if (p.status == PaperStatus::terminated) {
            for (double c : p.contrib) expected_neg -= c;
            members += p.size();
        } else if (p.status == PaperStatus::completed) {
            members += p.size();
        }
    }
    for (const auto& a : sim.agents()) expected_pos += a.utility_total / 100.0;
    CHECK(tally.rewards == members);
    CHECK(tally.positive == doctest::Approx(expected_pos));
    CHECK(tally.negative == doctest::Approx(expected_neg));
    CHECK_FALSE(tally.decided.empty());
    for (AgentId a : tally.decided) CHECK(sim.agents()[static_cast<std::size_t>(a)].policy == PolicyTag::strategic);
}
