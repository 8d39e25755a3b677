#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coauth/config.hpp"
#include "coauth/metrics.hpp"
#include "coauth/q_network.hpp"
#include "coauth/trainer.hpp"

namespace coauth {

const char* version_tag();

struct LabeledRun {
    int strategic_pct = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    RunData data;
};

/// Pure-greedy run written under `out`.
LabeledRun run_baseline(const Config& cfg, const std::filesystem::path& out);

struct SweepOptions {
    int replicates = 1;
    int parallel = 1;
    int steps = 10;  // compositions 0, 100/steps, ..., 100
};

/// Seed for one sweep run: composition c, replicate r.
std::uint64_t sweep_seed(const Config& cfg, int composition, int replicate);

/// One run per composition and replicate under out/cPPP_rR, then the table
/// CSVs in `out`. `qnet` may be null only if no composition has strategic agents.
std::vector<LabeledRun> run_sweep(const Config& cfg, const QNetwork* qnet, const std::filesystem::path& out,
                                  const SweepOptions& opt);

/// Training plus manifest under `out`.
TrainingResult run_train(const Config& cfg, const std::filesystem::path& out);

/// core_outcomes.csv, ultimatum_dynamics.csv, ultimatum_gap.csv,
/// ultimatum_timing.csv, lotka_stats.csv.
void write_tables(const std::vector<LabeledRun>& runs, const std::filesystem::path& out);

/// Greedy behavior against its target bands, as JSON.
std::string greedy_calibration_report(const std::vector<LabeledRun>& runs);

/// Reads a run directory, or a directory of run directories, and writes the tables into `out`.
std::vector<LabeledRun> analyze(const std::filesystem::path& logdir, const std::filesystem::path& out);

}  // namespace coauth
