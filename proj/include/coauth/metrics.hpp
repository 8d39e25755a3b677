#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coauth/collab.hpp"
#include "coauth/friendship_network.hpp"
#include "coauth/ultimatum.hpp"

namespace coauth {

/// Population Gini: sum_ij |x_i - x_j| / (2 n^2 mean). Throws
/// std::invalid_argument for empty, negative or all-zero input.
double gini(std::span<const double> values);

/// (x, P(X >= x)) over the unique values, ascending in x.
std::vector<std::pair<double, double>> ccdf(std::span<const double> values);

struct FitResult {
    std::string model;
    double alpha = 0.0;  // power law
    double mu = 0.0;     // lognormal
    double sigma = 0.0;
    std::optional<double> r2;  // absent when undefined (degenerate input)
    double x_min = 0.0;
    double x_max = 0.0;
    int points = 0;
};

/// OLS of log P on log x over the top `tail_fraction` of the points; alpha = -slope.
/// Throws std::invalid_argument with fewer than 3 usable tail points.
FitResult fit_power_law(std::span<const std::pair<double, double>> points, double tail_fraction = 0.5);

/// MLE of log-count mean and standard deviation; R^2 of log survival against
/// the empirical CCDF in log-log space. Throws for values below 1 or empty input.
FitResult fit_lognormal(std::span<const double> counts);

/// Share of the total held by the largest ceil(fraction * n) values.
double top_share(std::span<const double> values, double fraction = 0.10);

struct ErBaseline {
    double clustering;
    double path_length;
};

/// C_ER = k / N, L_ER = ln N / ln k. Throws std::invalid_argument when k <= 1.
ErBaseline er_baselines(double n, double mean_degree);

/// Ordinary least squares slope.
double ols_slope(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct StepRecord {
    int step = 0;
    long spawned = 0;
    long active = 0;
    long completed = 0;
    long terminated = 0;
    double mean_utility = 0.0;
    double utility_std = 0.0;
    std::optional<double> gini;
    std::optional<NetworkStats> network;
};

struct PaperRow {
    int id = 0;
    int start_step = 0;
    int end_step = -1;
    int duration = 0;
    int size = 0;
    PaperStatus status = PaperStatus::active;
    bool matured = false;  // scheduled completion falls inside the horizon
    std::vector<AgentId> authors;  // final order
};

struct AgentRow {
    AgentId id = 0;
    PolicyTag policy = PolicyTag::greedy;
    double exploration = 0.0;
    CareerCounters counters;
    double utility = 0.0;
};

/// Everything one simulation leaves behind.
struct RunData {
    int horizon = 0;
    double strategic_fraction = 0.0;
    std::vector<UltimatumEvent> events;
    std::vector<PaperRow> papers;
    std::vector<AgentRow> agents;
    std::vector<StepRecord> timeseries;
};

inline constexpr int kGapBuckets = 7;
inline constexpr int kTimingBinWeeks = 4;

struct InitiatorStats {
    long agents = 0;
    long participated = 0;
    long raised = 0;
    long accepted = 0;
    long withdrawn = 0;
    long terminated = 0;
    long votes = 0;
    long yes_votes = 0;
    std::optional<double> initiation_rate;  // raised per paper participated
    std::optional<double> accepted_share, withdrawn_share, terminated_share;
    std::optional<double> restraint;         // withdrawn / (withdrawn + terminated)
    std::optional<double> destruction_rate;  // terminated / raised
    std::optional<double> responder_acceptance;
    std::optional<double> median_week;
    std::vector<long> week_histogram;  // bins of kTimingBinWeeks
};

struct UltimatumAggregates {
    std::array<InitiatorStats, 2> by_type;  // indexed by PolicyTag
    std::array<long, kGapBuckets> gap_total{};
    std::array<long, kGapBuckets> gap_accepted{};
    std::array<std::optional<double>, kGapBuckets> gap_acceptance;
    // outcome counts per issuance-week bin: accepted, withdrawn, terminated
    std::vector<std::array<long, 3>> outcomes_by_week;
};

UltimatumAggregates ultimatum_aggregates(const RunData& run);

/// Headline outcomes of one run, measured on papers whose scheduled
/// completion falls inside the horizon.
struct CoreOutcomes {
    long matured = 0;
    long completed = 0;
    long terminated = 0;
    double completion_rate = 0.0;
    double destruction_rate = 0.0;
    double ultimatums_per_paper = 0.0;
    double accepted_per_paper = 0.0;
    double withdrawn_per_paper = 0.0;
    double terminated_per_paper = 0.0;
    double mean_utility = 0.0;
    std::optional<double> greedy_utility;
    std::optional<double> strategic_utility;
    std::optional<double> advantage;           // strategic - greedy
    std::optional<double> relative_advantage;  // advantage / greedy
    std::optional<double> gini;
};

CoreOutcomes core_outcomes(const RunData& run);

struct LotkaStats {
    long agents = 0;
    long zero_output = 0;
    std::optional<FitResult> power_law;
    std::optional<FitResult> lognormal;
    std::optional<double> top10;
};

/// Productivity (completed papers per agent) statistics for one policy type.
LotkaStats lotka_stats(const RunData& run, PolicyTag type);

}  // namespace coauth
