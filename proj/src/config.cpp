#include "coauth/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace coauth {

namespace {

// Calls f(key, field) for every configurable field, in a fixed order.
template <typename C, typename F>
void visit_fields(C& c, F&& f) {
    f("population.n", c.population.n);
    f("population.horizon", c.population.horizon);
    f("population.paper_spawn_rate", c.population.paper_spawn_rate);
    f("population.max_concurrent_papers", c.population.max_concurrent_papers);

    f("network.lambda_friendship", c.network.lambda_friendship);
    f("network.mu_w", c.network.mu_w);
    f("network.sigma_w", c.network.sigma_w);
    f("network.exploration_mean", c.network.exploration_mean);
    f("network.exploration_std", c.network.exploration_std);

    f("collab.lambda_k", c.collab.lambda_k);
    f("collab.k_max", c.collab.k_max);
    f("collab.duration_min", c.collab.duration_min);
    f("collab.duration_max", c.collab.duration_max);
    f("collab.contribution_mode", c.collab.contribution_mode);
    f("collab.dirichlet_concentration", c.collab.dirichlet_concentration);
    f("collab.recruit_budget_factor", c.collab.recruit_budget_factor);

    f("utility.u0_min", c.utility.u0_min);
    f("utility.u0_max", c.utility.u0_max);
    f("utility.eta_min", c.utility.eta_min);
    f("utility.eta_max", c.utility.eta_max);
    f("utility.xi", c.utility.xi);
    f("utility.rho", c.utility.rho);
    f("utility.discount_period_steps", c.utility.discount_period_steps);

    f("reputation.delta_success", c.reputation.delta_success);
    f("reputation.delta_withdraw", c.reputation.delta_withdraw);
    f("reputation.gamma", c.reputation.gamma);
    f("reputation.theta", c.reputation.theta);
    f("reputation.alpha", c.reputation.alpha);
    f("reputation.epsilon_cut", c.reputation.epsilon_cut);

    f("ultimatum.opportunity_rate", c.ultimatum.opportunity_rate);

    f("greedy.p_insist", c.greedy.p_insist);
    f("greedy.lambda_loss", c.greedy.lambda_loss);
    f("greedy.p_commit", c.greedy.p_commit);

    f("drl.learning_rate", c.drl.learning_rate);
    f("drl.gamma_rl", c.drl.gamma_rl);
    f("drl.eps0", c.drl.eps0);
    f("drl.eps_final", c.drl.eps_final);
    f("drl.eps_decay", c.drl.eps_decay);
    f("drl.replay_capacity", c.drl.replay_capacity);
    f("drl.batch_size", c.drl.batch_size);
    f("drl.target_update_every", c.drl.target_update_every);
    f("drl.train_every", c.drl.train_every);
    f("drl.episodes", c.drl.episodes);
    f("drl.lambda_destr", c.drl.lambda_destr);
    f("drl.lambda_deg", c.drl.lambda_deg);
    f("drl.paper_dim", c.drl.paper_dim);
    f("drl.agent_dim", c.drl.agent_dim);
    f("drl.network_dim", c.drl.network_dim);
    f("drl.encoder_dim", c.drl.encoder_dim);
    f("drl.hidden_dim", c.drl.hidden_dim);
    f("drl.ego_sample_cap", c.drl.ego_sample_cap);
    f("drl.conversion_interval", c.drl.conversion_interval);
    f("drl.final_strategic_fraction", c.drl.final_strategic_fraction);
    f("drl.record_all_agents", c.drl.record_all_agents);
    f("drl.checkpoint_every", c.drl.checkpoint_every);

    f("run.seed", c.run.seed);
    f("run.strategic_fraction", c.run.strategic_fraction);
    f("run.stats_interval", c.run.stats_interval);
    f("run.path_length_sources", c.run.path_length_sources);
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
        out = out.substr(1, out.size() - 2);
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
}

void parse_into(std::string_view key, std::string_view text, int& out) {
    long long v = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        // accept "1e4"-style or "10000.0" when integral
        double d = 0;
        std::istringstream is{std::string(text)};
        if (!(is >> d) || !is.eof() || d != std::floor(d)) bad_value(key, text);
        v = static_cast<long long>(d);
    }
    out = static_cast<int>(v);
}

void parse_into(std::string_view key, std::string_view text, std::uint64_t& out) {
    auto r = std::from_chars(text.data(), text.data() + text.size(), out);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) bad_value(key, text);
}

void parse_into(std::string_view key, std::string_view text, double& out) {
    std::istringstream is{std::string(text)};
    is.imbue(std::locale::classic());
    if (!(is >> out) || !(is >> std::ws).eof()) bad_value(key, text);
}

void parse_into(std::string_view key, std::string_view text, bool& out) {
    if (text == "true" || text == "1" || text == "yes") out = true;
    else if (text == "false" || text == "0" || text == "no") out = false;
    else bad_value(key, text);
}

void parse_into(std::string_view key, std::string_view text, ContributionMode& out) {
    if (text == "equal") out = ContributionMode::equal;
    else if (text == "dirichlet") out = ContributionMode::dirichlet;
    else bad_value(key, text);
}

std::string mode_name(ContributionMode m) { return m == ContributionMode::equal ? "equal" : "dirichlet"; }

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, const char* field, const char* constraint) {
    if (!ok) throw ConfigError(std::string(field) + ": constraint violated: " + constraint);
}

}  // namespace

void set_field(Config& cfg, std::string_view key, std::string_view value) {
    bool found = false;
    visit_fields(cfg, [&](std::string_view k, auto& field) {
        if (k == key) {
            parse_into(key, value, field);
            found = true;
        }
    });
    if (!found) throw ConfigError("unknown config key: " + std::string(key));
}

void Config::validate() const {
    require(population.n >= 2, "population.n", "n >= 2");
    require(population.horizon >= 1, "population.horizon", "horizon >= 1");
    require(population.paper_spawn_rate >= 0.0 && population.paper_spawn_rate <= 1.0,
            "population.paper_spawn_rate", "rate in [0,1]");
    require(population.max_concurrent_papers >= 1, "population.max_concurrent_papers", ">= 1");

    require(network.lambda_friendship > 0.0, "network.lambda_friendship", "lambda_friendship > 0");
    require(network.sigma_w >= 0.0, "network.sigma_w", "sigma_w >= 0");
    require(network.exploration_std >= 0.0, "network.exploration_std", "exploration_std >= 0");

    require(collab.lambda_k >= 0.0, "collab.lambda_k", "lambda_k >= 0");
    require(collab.k_max >= 2, "collab.k_max", "K_max >= 2");
    require(collab.duration_min >= 1, "collab.duration_min", "duration_min >= 1");
    require(collab.duration_max > collab.duration_min, "collab.duration_max", "duration_max > duration_min");
    require(collab.dirichlet_concentration > 0.0, "collab.dirichlet_concentration", "> 0");
    require(collab.recruit_budget_factor >= 1, "collab.recruit_budget_factor", ">= 1");

    require(utility.u0_min > 0.0 && utility.u0_min <= utility.u0_max, "utility.u0_min", "0 < u0_min <= u0_max");
    require(utility.eta_min > 0.0 && utility.eta_max < 1.0 && utility.eta_min <= utility.eta_max,
            "utility.eta_min", "0 < eta_min <= eta_max < 1");
    require(utility.xi > 0.0, "utility.xi", "xi > 0");
    require(utility.rho >= 0.0 && utility.rho <= 1.0, "utility.rho", "rho in [0,1]");
    require(utility.discount_period_steps >= 1, "utility.discount_period_steps", ">= 1");

    require(reputation.delta_success > 0.0, "reputation.delta_success", "> 0");
    require(reputation.delta_withdraw > 0.0, "reputation.delta_withdraw", "> 0");
    require(reputation.gamma > 0.0, "reputation.gamma", "> 0");
    require(reputation.theta > 0.0, "reputation.theta", "> 0");
    require(reputation.alpha > 0.0, "reputation.alpha", "> 0");
    require(reputation.epsilon_cut > 0.0 && reputation.epsilon_cut < 1.0, "reputation.epsilon_cut",
            "epsilon_cut in (0,1)");

    require(ultimatum.opportunity_rate >= 0.0 && ultimatum.opportunity_rate <= 1.0,
            "ultimatum.opportunity_rate", "in [0,1]");

    require(greedy.p_insist >= 0.0 && greedy.p_insist <= 1.0, "greedy.p_insist", "in [0,1]");
    require(greedy.lambda_loss >= 0.0, "greedy.lambda_loss", ">= 0");
    require(greedy.p_commit >= 0.0 && greedy.p_commit <= 1.0, "greedy.p_commit", "in [0,1]");

    require(drl.learning_rate > 0.0, "drl.learning_rate", "> 0");
    require(drl.gamma_rl > 0.0 && drl.gamma_rl < 1.0, "drl.gamma_rl", "gamma_rl in (0,1)");
    require(drl.eps0 >= 0.0 && drl.eps0 <= 1.0, "drl.eps0", "in [0,1]");
    require(drl.eps_final >= 0.0 && drl.eps_final <= drl.eps0, "drl.eps_final", "eps_final <= eps0");
    require(drl.eps_decay > 0.0 && drl.eps_decay <= 1.0, "drl.eps_decay", "in (0,1]");
    require(drl.replay_capacity >= 1, "drl.replay_capacity", ">= 1");
    require(drl.batch_size >= 1 && drl.batch_size <= drl.replay_capacity, "drl.batch_size",
            "1 <= batch_size <= replay_capacity");
    require(drl.target_update_every >= 1, "drl.target_update_every", ">= 1");
    require(drl.train_every >= 1, "drl.train_every", ">= 1");
    require(drl.episodes >= 1, "drl.episodes", ">= 1");
    require(drl.lambda_destr > 0.0, "drl.lambda_destr", "> 0");
    require(drl.lambda_deg >= 0.0, "drl.lambda_deg", ">= 0");
    require(drl.paper_dim == 14, "drl.paper_dim", "paper feature layout has 14 slots");
    require(drl.agent_dim == 8, "drl.agent_dim", "agent feature layout has 8 slots");
    require(drl.network_dim == 5, "drl.network_dim", "network feature layout has 5 slots");
    require(drl.encoder_dim > 0, "drl.encoder_dim", "dims > 0");
    require(drl.hidden_dim > 0, "drl.hidden_dim", "dims > 0");
    require(drl.ego_sample_cap >= 1, "drl.ego_sample_cap", ">= 1");
    require(drl.conversion_interval >= 1, "drl.conversion_interval", ">= 1");
    require(drl.final_strategic_fraction >= 0.0 && drl.final_strategic_fraction <= 1.0,
            "drl.final_strategic_fraction", "in [0,1]");
    require(drl.checkpoint_every >= 1, "drl.checkpoint_every", ">= 1");

    require(run.strategic_fraction >= 0.0 && run.strategic_fraction <= 1.0, "run.strategic_fraction",
            "in [0,1]");
    require(run.stats_interval >= 1, "run.stats_interval", ">= 1");
    require(run.path_length_sources >= 0, "run.path_length_sources", ">= 0");
}

Config parse_config(std::string_view text, Config base) {
    Config cfg = base;
    std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config parse failure: ") + e.what());
        }
        for (auto& [section, fields] : j.items()) {
            if (!fields.is_object()) throw ConfigError("config parse failure: section '" + section + "' is not an object");
            for (auto& [k, v] : fields.items()) {
                std::string key = section + "." + k;
                std::string value = v.is_string() ? v.get<std::string>() : v.dump();
                set_field(cfg, key, value);
            }
        }
    } else {
        std::istringstream in{std::string(text)};
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw ConfigError("config parse failure at line " + std::to_string(lineno));
                section = trim(std::string_view(t).substr(1, t.size() - 2));
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config parse failure at line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(std::string_view(t).substr(0, eq));
            std::string value = trim(std::string_view(t).substr(eq + 1));
            if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;
            set_field(cfg, key, value);
        }
    }
    cfg.validate();
    return cfg;
}

Config load_config(const std::filesystem::path& path, Config base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string to_json(const Config& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    visit_fields(cfg, [&](std::string_view key, const auto& field) {
        auto dot = key.find('.');
        std::string section(key.substr(0, dot));
        std::string name(key.substr(dot + 1));
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, ContributionMode>) j[section][name] = mode_name(field);
        else j[section][name] = field;
    });
    return j.dump(2);
}

std::string to_key_value(const Config& cfg) {
    std::ostringstream os;
    std::string current;
    visit_fields(cfg, [&](std::string_view key, const auto& field) {
        auto dot = key.find('.');
        std::string section(key.substr(0, dot));
        if (section != current) {
            if (!current.empty()) os << "\n";
            os << "[" << section << "]\n";
            current = section;
        }
        os << key.substr(dot + 1) << " = ";
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, ContributionMode>) os << mode_name(field);
        else if constexpr (std::is_same_v<T, bool>) os << (field ? "true" : "false");
        else if constexpr (std::is_same_v<T, double>) os << format_double(field);
        else os << field;
        os << "\n";
    });
    return os.str();
}

Config preset(std::string_view name) {
    Config c;
    if (name == "paper-eval" || name == "paper") return c;
    if (name == "paper-train") {
        c.population.n = 1000;
        return c;
    }
    if (name == "desk-eval" || name == "desk") {
        c.population.n = 500;
        c.population.horizon = 400;
        c.population.paper_spawn_rate = 0.01;
        c.drl.episodes = 50;
        return c;
    }
    if (name == "desk-train") {
        c.population.n = 200;
        c.population.horizon = 300;
        c.population.paper_spawn_rate = 0.01;
        c.drl.episodes = 50;
        // Same epsilon trajectory as the 500-episode schedule, compressed 10x.
        c.drl.eps_decay = std::pow(0.9825, 10.0);
        c.drl.target_update_every = 300;
        return c;
    }
    throw ConfigError("unknown profile: " + std::string(name));
}

}  // namespace coauth
