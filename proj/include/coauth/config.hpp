#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "coauth/random.hpp"

namespace coauth {

/// Raised for unparsable files, unknown keys and violated parameter
/// constraints. The message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ContributionMode { equal, dirichlet };

struct PopulationParams {
    int n = 10000;
    int horizon = 1565;
    double paper_spawn_rate = 0.001;  // expected formation attempts per idle-capable agent per step
    int max_concurrent_papers = 5;
};

struct NetworkParams {
    double lambda_friendship = 3.0;
    double mu_w = 0.5;
    double sigma_w = 0.2;
    double exploration_mean = 0.05;
    double exploration_std = 0.02;
};

struct CollabParams {
    double lambda_k = 3.0;
    int k_max = 8;
    int duration_min = 8;
    int duration_max = 88;
    ContributionMode contribution_mode = ContributionMode::equal;
    double dirichlet_concentration = 5.0;
    int recruit_budget_factor = 10;  // sample attempts per target member
};

struct UtilityParams {
    double u0_min = 10.0;
    double u0_max = 100.0;
    double eta_min = 0.5;
    double eta_max = 0.8;
    double xi = 0.1;
    double rho = 0.05;
    int discount_period_steps = 52;  // rho applies per period; 52 weekly steps = one year
};

struct ReputationParams {
    double delta_success = 0.1;
    double delta_withdraw = 0.05;
    double gamma = 0.2;
    double theta = 0.5;
    double alpha = 1.0;
    double epsilon_cut = 0.01;
};

struct UltimatumParams {
    // Per-week probability that an eligible author gets the chance to raise.
    double opportunity_rate = 0.015;
};

/// Behavioral constants of the myopic baseline policy.
struct GreedyParams {
    double p_insist = 0.25;   // responders' prior that a refused issuer insists
    double lambda_loss = 6.0; // weight of sunk contribution in escalation losses
    double p_commit = 0.27;   // issuer commitment draw needed to insist
};

struct DrlParams {
    double learning_rate = 1e-4;
    double gamma_rl = 0.99;
    double eps0 = 1.0;
    double eps_final = 0.01;
    double eps_decay = 0.9825;
    int replay_capacity = 100000;
    int batch_size = 32;
    int target_update_every = 1000;  // simulation steps
    int train_every = 1;             // new transitions per gradient update
    int episodes = 500;
    double lambda_destr = 1.0;
    double lambda_deg = 0.0;
    int paper_dim = 14;
    int agent_dim = 8;
    int network_dim = 5;
    int encoder_dim = 64;
    int hidden_dim = 128;
    int ego_sample_cap = 50;
    int conversion_interval = 10;
    double final_strategic_fraction = 0.8;
    bool record_all_agents = true;
    int checkpoint_every = 50;
};

struct RunParams {
    std::uint64_t seed = 1;
    double strategic_fraction = 0.0;
    int stats_interval = 10;
    int path_length_sources = 0;  // 0 = exact all-pairs in the giant component
};

struct Config {
    PopulationParams population;
    NetworkParams network;
    CollabParams collab;
    UtilityParams utility;
    ReputationParams reputation;
    UltimatumParams ultimatum;
    GreedyParams greedy;
    DrlParams drl;
    RunParams run;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    RandomSource random_source() const { return RandomSource(run.seed); }
};

/// Reads a key/value file (`[section]` headers with `key = value` lines, or
/// dotted `section.key = value`) or a JSON object as emitted by to_json().
/// Unset fields keep their current values in `base`.
Config load_config(const std::filesystem::path& path, Config base = {});
Config parse_config(std::string_view text, Config base = {});

std::string to_json(const Config& cfg);
std::string to_key_value(const Config& cfg);

/// Named presets: "paper-eval" (table defaults), "paper-train",
/// "desk-eval", "desk-train". Throws ConfigError on unknown names.
Config preset(std::string_view name);

/// Sets a single dotted field from its text form.
void set_field(Config& cfg, std::string_view key, std::string_view value);

}  // namespace coauth
