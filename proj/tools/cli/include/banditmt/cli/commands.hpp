#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "banditmt/analysis.hpp"
#include "banditmt/cli/run_config.hpp"
#include "banditmt/replay_log.hpp"

namespace banditmt::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_data_error = 3,
    exit_runtime_error = 4,
};

/// One seed of one policy. `dataset` is required for replay environments.
RunReport run_seed(const RunConfig &config, const PolicySpec &policy, const ReplayDataset *dataset,
                   std::uint64_t seed);

/// Every configured seed on at most `config.workers` threads. Results are
/// in seed-list order whatever the scheduling.
std::vector<RunReport> run_seeds(const RunConfig &config, const PolicySpec &policy, const ReplayDataset *dataset);

/// <output>/<policy>/seed_<n>.json, aggregate.json and, with csv enabled,
/// per-seed regret and histogram tables.
void write_outputs(const RunConfig &config, const std::vector<RunReport> &reports, const AggregateReport &aggregate);

/// Runs every policy of a synthetic config. Throws on failure.
void simulate(const RunConfig &config, std::ostream &log);
/// Loads the log, checks every policy against it, then runs.
void replay(const RunConfig &config, std::ostream &log);
/// Prints each violation; returns true when the log is clean.
bool validate_log(const std::filesystem::path &path, std::ostream &out);
/// Aggregates per-seed report files (directories expand to their
/// seed_*.json). Writes to `output` or, without one, to `out`.
void report(const std::vector<std::filesystem::path> &inputs, const std::optional<std::filesystem::path> &output,
            std::ostream &out);

/// Whole command line; never throws, returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace banditmt::cli
