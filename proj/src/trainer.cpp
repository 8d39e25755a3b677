#include "coauth/trainer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "coauth/checkpoint.hpp"

namespace coauth {

int conversion_batch(int n, int episodes, const DrlParams& p) {
    const double rounds = p.final_strategic_fraction * episodes / p.conversion_interval;
    const int target = static_cast<int>(std::lround(p.final_strategic_fraction * n));
    if (rounds < 1.0) return target;
    return static_cast<int>(std::ceil(target / std::floor(rounds)));
}

Learner::Learner(const Config& cfg, QNetwork& online, std::uint64_t seed)
    : p_(cfg.drl),
      online_(online),
      target_(online),
      adam_(online.params().size(), cfg.drl.learning_rate),
      buffer_(static_cast<std::size_t>(cfg.drl.replay_capacity), online.dims().state()),
      rng_(RandomSource(seed).derive_stream("training-sampling")),
      pending_(static_cast<std::size_t>(cfg.population.n)) {}

void Learner::push(Transition t) {
    buffer_.push(t);
    if (buffer_.pushes() % p_.train_every == 0 && buffer_.size() >= static_cast<std::size_t>(p_.batch_size)) {
        loss_sum_ += train_step(online_, target_, buffer_, adam_, static_cast<std::size_t>(p_.batch_size), p_.gamma_rl, rng_);
        ++loss_count_;
        ++updates_;
    }
}

void Learner::on_decision(AgentId agent, std::vector<double> state, Decision d, int action, double wdeg) {
    Pending& p = pending_[static_cast<std::size_t>(agent)];
    if (p.open) {
        Transition t;
        t.state = std::move(p.state);
        t.decision = p.decision;
        t.action = p.action;
        t.reward = p.reward + p_.lambda_deg * (wdeg - p.wdeg);
        t.next_state = state;
        t.next_decision = d;
        t.terminal = false;
        push(std::move(t));
    }
    p.state = std::move(state);
    p.decision = d;
    p.action = action;
    p.reward = 0.0;
    p.wdeg = wdeg;
    p.open = true;
}

void Learner::on_reward(AgentId agent, double reward) {
    Pending& p = pending_[static_cast<std::size_t>(agent)];
    if (p.open) p.reward += reward;
}

void Learner::on_step_end(int) {
    ++sim_steps_;
    if (sim_steps_ % p_.target_update_every == 0) target_ = online_;
}

void Learner::end_episode() {
    for (Pending& p : pending_) {
        if (!p.open) continue;
        Transition t;
        t.state = std::move(p.state);
        t.decision = p.decision;
        t.action = p.action;
        t.reward = p.reward;
        t.next_state.assign(t.state.size(), 0.0);
        t.next_decision = p.decision;
        t.terminal = true;
        push(std::move(t));
        p = Pending{};
    }
}

double Learner::take_mean_loss() {
    double m = loss_count_ ? loss_sum_ / static_cast<double>(loss_count_) : 0.0;
    loss_sum_ = 0.0;
    loss_count_ = 0;
    return m;
}

void write_curves(const std::vector<EpisodeRow>& rows, std::ostream& out) {
    out << "episode,mean_utility,papers_completed,papers_destroyed,completion_rate,epsilon,strategic_fraction\n";
    out << std::setprecision(10);
    for (const EpisodeRow& r : rows)
        out << r.episode << ',' << r.mean_utility << ',' << r.papers_completed << ',' << r.papers_destroyed << ','
            << r.completion_rate << ',' << r.epsilon << ',' << r.strategic_fraction << '\n';
}

TrainingResult run_training(const Config& cfg, const std::optional<std::filesystem::path>& out_dir,
                            const EpisodeCallback& on_episode) {
    cfg.validate();
    const RandomSource root = cfg.random_source();
    const DrlParams& p = cfg.drl;
    const int n = cfg.population.n;

    QNetwork online(NetworkDims::from(p));
    Rng init = root.derive_stream("training-sampling", 1);
    online.init_he(init);
    Learner learner(cfg, online, root.child_seed("learner", 0));

    std::vector<PolicyTag> tags = [&] {
        Rng assign = root.derive_stream("population-assignment");
        return assign_policies(n, cfg.run.strategic_fraction, assign);
    }();
    Rng convert = root.derive_stream("population-assignment", 1);
    const int batch = conversion_batch(n, p.episodes, p);
    const int target_strategic = static_cast<int>(std::lround(p.final_strategic_fraction * n));

    if (out_dir) std::filesystem::create_directories(*out_dir);
    TrainingResult result{online, {}, {}};
    for (int ep = 0; ep < p.episodes; ++ep) {
        if (ep > 0 && ep % p.conversion_interval == 0 && ep <= p.final_strategic_fraction * p.episodes) {
            std::vector<int> greedy;
            int strategic = 0;
            for (int i = 0; i < n; ++i) {
                if (tags[static_cast<std::size_t>(i)] == PolicyTag::greedy) greedy.push_back(i);
                else ++strategic;
            }
            int k = std::min({batch, target_strategic - strategic, static_cast<int>(greedy.size())});
            for (int c = 0; c < k; ++c) {
                int pick = convert.uniform_int(c, static_cast<int>(greedy.size()) - 1);
                std::swap(greedy[static_cast<std::size_t>(c)], greedy[static_cast<std::size_t>(pick)]);
                tags[static_cast<std::size_t>(greedy[static_cast<std::size_t>(c)])] = PolicyTag::strategic;
            }
        }

        Config ep_cfg = cfg;
        ep_cfg.run.seed = root.child_seed("episode", static_cast<std::uint64_t>(ep));
        PolicyHooks hooks;
        hooks.qnet = &online;
        hooks.epsilon = epsilon_at(ep, p);
        hooks.sink = &learner;
        hooks.record_greedy = p.record_all_agents;
        Simulation sim(ep_cfg, tags, hooks);
        sim.run();
        learner.end_episode();

        RunData data = sim.data();
        CoreOutcomes core = core_outcomes(data);
        EpisodeRow row;
        row.episode = ep;
        row.mean_utility = core.mean_utility;
        row.papers_completed = core.completed;
        row.papers_destroyed = core.terminated;
        row.completion_rate = core.completion_rate;
        row.epsilon = hooks.epsilon;
        row.strategic_fraction = data.strategic_fraction;
        row.mean_loss = learner.take_mean_loss();
        row.updates = learner.updates();
        result.curves.push_back(row);

        if (out_dir && p.checkpoint_every > 0 && (ep + 1) % p.checkpoint_every == 0) {
            std::ostringstream name;
            name << "checkpoint_ep" << std::setw(3) << std::setfill('0') << ep + 1 << ".bin";
            save_checkpoint(online, *out_dir / name.str());
        }
        if (on_episode) on_episode(row, online);
    }
    result.network = online;
    result.final_policies = tags;
    if (out_dir) {
        save_checkpoint(online, *out_dir / "checkpoint.bin");
        std::ofstream curves(*out_dir / "curves.csv");
        write_curves(result.curves, curves);
    }
    return result;
}

}  // namespace coauth
