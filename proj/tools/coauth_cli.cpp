#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coauth/checkpoint.hpp"
#include "coauth/config.hpp"
#include "coauth/run_log.hpp"
#include "coauth/runner.hpp"

namespace fs = std::filesystem;
using namespace coauth;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kMissingCheckpoint = 3;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string profile = "desk";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Config file (key/value or JSON)");
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--profile", c.profile, "Preset scale")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--set", c.overrides, "Override one field, section.key=value");
}

Config build_config(const Common& c, const std::string& role) {
    Config cfg = preset(c.profile + "-" + role);
    if (!c.config_path.empty()) cfg = load_config(c.config_path, cfg);
    for (const std::string& kv : c.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError(kv + ": expected section.key=value");
        set_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed) cfg.run.seed = *c.seed;
    cfg.validate();
    return cfg;
}

void print_core(const std::vector<LabeledRun>& runs) {
    std::cout << "strategic_pct,replicate,completion_rate,destruction_rate,ultimatums_per_paper,mean_utility,gini\n";
    for (const LabeledRun& r : runs) {
        CoreOutcomes c = core_outcomes(r.data);
        std::cout << r.strategic_pct << ',' << r.replicate << ',' << format_double(c.completion_rate) << ','
                  << format_double(c.destruction_rate) << ',' << format_double(c.ultimatums_per_paper) << ','
                  << format_double(c.mean_utility) << ',' << format_optional(c.gini) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Networked co-authorship ultimatum simulator"};
    app.require_subcommand(1);

    Common base_opts, train_opts, sweep_opts;
    auto* baseline = app.add_subcommand("baseline", "Pure-greedy longitudinal run");
    add_common(baseline, base_opts);

    auto* train = app.add_subcommand("train", "Train the strategic Q-network");
    add_common(train, train_opts);

    auto* sweep = app.add_subcommand("sweep", "Evaluate 0..100% strategic compositions");
    add_common(sweep, sweep_opts);
    std::string checkpoint;
    int parallel = 1;
    int replicates = 1;
    sweep->add_option("--checkpoint", checkpoint, "Trained checkpoint");
    sweep->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);
    sweep->add_option("--replicates", replicates, "Seeds per composition")->check(CLI::PositiveNumber);

    auto* an = app.add_subcommand("analyze", "Recompute tables from run logs");
    std::string logdir;
    std::string analyze_out;
    an->add_option("logdir", logdir, "Run directory or sweep directory")->required();
    an->add_option("--out", analyze_out, "Where to write the tables (default: logdir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*baseline) {
            Config cfg = build_config(base_opts, "eval");
            auto run = run_baseline(cfg, base_opts.out);
            print_core({run});
        } else if (*train) {
            Config cfg = build_config(train_opts, "train");
            auto r = run_train(cfg, train_opts.out);
            const EpisodeRow& last = r.curves.back();
            std::cout << "episodes " << r.curves.size() << ", final completion rate "
                      << format_double(last.completion_rate) << ", checkpoint "
                      << (fs::path(train_opts.out) / "checkpoint.bin").string() << '\n';
        } else if (*sweep) {
            Config cfg = build_config(sweep_opts, "eval");
            if (checkpoint.empty()) {
                std::cerr << "sweep: --checkpoint is required\n";
                return kMissingCheckpoint;
            }
            QNetwork net;
            try {
                net = load_checkpoint(checkpoint, NetworkDims::from(cfg.drl));
            } catch (const CheckpointError& e) {
                std::cerr << "sweep: " << e.what() << '\n';
                return e.kind() == CheckpointError::Kind::dims ? kConfigError : kMissingCheckpoint;
            }
            SweepOptions opt;
            opt.parallel = parallel;
            opt.replicates = replicates;
            print_core(run_sweep(cfg, &net, sweep_opts.out, opt));
        } else if (*an) {
            fs::path out = analyze_out.empty() ? fs::path(logdir) : fs::path(analyze_out);
            print_core(analyze(logdir, out));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
