#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "coauth/config.hpp"
#include "coauth/friendship_network.hpp"
#include "coauth/metrics.hpp"

namespace coauth {

/// Shortest text that reads back to the same double.
std::string format_double(double v);
/// format_double, or "---" when absent.
std::string format_optional(const std::optional<double>& v);

void write_events(const RunData& run, std::ostream& out);
void write_votes(const RunData& run, std::ostream& out);
void write_papers(const RunData& run, std::ostream& out);
void write_agents(const RunData& run, std::ostream& out);
void write_timeseries(const RunData& run, std::ostream& out);

/// events.csv, votes.csv, papers.csv, agents.csv, timeseries.csv,
/// network.csv (when `net` is given) and run.json.
void write_run(const std::filesystem::path& dir, const RunData& run, const Config& cfg,
               const FriendshipNetwork* net);

/// Reads a directory written by write_run. Throws std::runtime_error on
/// missing files or malformed rows.
RunData read_run(const std::filesystem::path& dir);

}  // namespace coauth
