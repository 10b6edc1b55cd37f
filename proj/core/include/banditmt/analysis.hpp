#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "banditmt/replay_env.hpp"
#include "banditmt/replay_log.hpp"
#include "banditmt/reward.hpp"
#include "banditmt/types.hpp"

namespace banditmt {

/// Cumulative regret against the per-round oracle:
///   curve[t] = sum_{s <= t} (max_a r_{s,a} - r_{s,chosen}).
/// Uses expected per-arm rewards when a record has them, realized per-arm
/// rewards otherwise. Throws DataError if a record has neither.
std::vector<double> compute_regret(std::span<const RoundRecord> records);

struct FixedArm {
    ArmId arm;
    double average = 0.0;
};

/// Mean combined reward of every arm over rows [first, last).
std::vector<double> arm_averages(const ReplayDataset &dataset, const RewardConfig &config, std::size_t first,
                                 std::size_t last);

/// The single arm with the highest mean combined reward over all rows
/// (lowest index on ties). Throws DataError on an empty dataset.
FixedArm best_fixed_arm(const ReplayDataset &dataset, const RewardConfig &config);
/// Same, restricted to rows [first, last).
FixedArm best_fixed_arm(const ReplayDataset &dataset, const RewardConfig &config, std::size_t first,
                        std::size_t last);

/// Corpus BLEU of the chosen arms' hypotheses for the test-phase records.
/// Throws DataError when there are no test records or texts are missing.
double selected_corpus_bleu(std::span<const RoundRecord> records, const ReplayDataset &dataset,
                            TokenizerKind tokenizer = TokenizerKind::whitespace_punct);

/// Corpus BLEU of one arm's hypotheses over rows [first, last).
double fixed_arm_corpus_bleu(const ReplayDataset &dataset, ArmId arm, std::size_t first, std::size_t last,
                             TokenizerKind tokenizer = TokenizerKind::whitespace_punct);

inline constexpr int kReportVersion = 1;

/// Replay-only comparison against the best fixed system on the test split.
struct ReplaySummary {
    std::size_t test_rounds = 0;
    double test_mean_reward = 0.0;
    std::size_t best_fixed_arm = 0;
    std::string best_fixed_arm_name;
    double best_fixed_arm_average = 0.0;
    /// sum over test rounds of (r_best_fixed - r_chosen); negative when the
    /// policy beat the best single system.
    double test_regret_vs_best_fixed = 0.0;
    std::optional<double> selected_corpus_bleu;
    std::optional<double> best_fixed_arm_corpus_bleu;
    std::optional<double> bleu_delta_absolute; ///< selected - best fixed
    std::optional<double> bleu_delta_relative; ///< percent of best fixed

    friend bool operator==(const ReplaySummary &, const ReplaySummary &) = default;
};

struct RunReport {
    std::string policy;
    std::string environment; ///< "synthetic" or "replay"
    std::vector<std::uint64_t> seeds;
    std::size_t seeds_aggregated = 1;
    std::string config_digest;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> arm_names;
    std::uint64_t rounds = 0;
    double cumulative_reward = 0.0;
    double cumulative_regret = 0.0;
    std::vector<double> regret_curve;
    std::vector<std::uint64_t> arm_histogram;
    std::optional<ReplaySummary> replay;

    friend bool operator==(const RunReport &, const RunReport &) = default;
};

/// Rounds, reward, regret and histogram from a record list.
RunReport summarize_run(std::span<const RoundRecord> records, std::size_t num_arms);

/// Fills report.replay from test-phase records.
void add_replay_summary(RunReport &report, std::span<const RoundRecord> records, const ReplayDataset &dataset,
                        const RewardConfig &reward, const ReplayOptions &options);

nlohmann::json to_json(const RunReport &report);
/// Throws DataError on a malformed document.
RunReport run_report_from_json(const nlohmann::json &j);

struct Dispersion {
    double mean = 0.0;
    double sd = 0.0; ///< sample standard deviation (n - 1); 0 for one value
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const Dispersion &, const Dispersion &) = default;
};

/// Mean/sd/min/max with values sorted first, so the result does not depend
/// on input order. Throws std::invalid_argument on an empty list.
Dispersion dispersion_of(std::vector<double> values);

struct AggregateReport {
    RunReport summary; ///< scalar means, element-wise mean curve, summed histogram
    std::map<std::string, Dispersion> dispersion;
};

/// Aggregates per-seed reports of one configuration. Throws DataError when
/// config digests differ or the list is empty.
AggregateReport aggregate_seeds(std::span<const RunReport> reports);

nlohmann::json to_json(const AggregateReport &report);

/// "round,cumulative_regret" rows.
void write_regret_csv(std::ostream &out, const RunReport &report);
/// "arm,name,count" rows.
void write_histogram_csv(std::ostream &out, const RunReport &report);

} // namespace banditmt
