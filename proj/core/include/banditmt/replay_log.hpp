#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "banditmt/reward.hpp"
#include "banditmt/types.hpp"

namespace banditmt {

/// First record of a replay log.
struct ReplayHeader {
    std::vector<std::string> arms;
    std::size_t dim = 0; ///< context dimension, 0 when rows carry no contexts
    std::string language_pair;
    std::string domain;
    /// Any other header fields (e.g. "context_normalized"), preserved as-is.
    nlohmann::json extra = nlohmann::json::object();
};

/// One source sentence: its context and every arm's precomputed scores.
struct ReplayRow {
    std::string sentence_id;
    std::optional<ContextVector> context;
    std::vector<MetricScores> scores; ///< indexed like ReplayHeader::arms
    std::optional<std::string> source;
    std::optional<std::string> reference;
    /// Indexed like ReplayHeader::arms; empty when the row carries no texts.
    std::vector<std::optional<std::string>> hypotheses;
};

/// A violated ReplayDataset invariant. `row` is the 1-based data record
/// index (0 for the header); `line` is the 1-based file line, 0 when the
/// data did not come from a file.
struct LogViolation {
    std::size_t row = 0;
    std::size_t line = 0;
    std::string message;

    std::string describe() const;
};

/// Validated in-memory replay log.
///
/// Invariants: every row has exactly one score entry per arm; contexts are
/// all present with length dim, or all absent with dim == 0; sentence ids
/// are unique.
class ReplayDataset {
  public:
    /// Throws DataError listing every violation.
    ReplayDataset(ReplayHeader header, std::vector<ReplayRow> rows);

    const ReplayHeader &header() const noexcept { return header_; }
    const std::vector<ReplayRow> &rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t num_arms() const noexcept { return header_.arms.size(); }
    std::size_t dim() const noexcept { return header_.dim; }
    bool has_contexts() const noexcept { return header_.dim > 0; }
    /// True when every row carries a reference and every arm's hypothesis.
    bool has_texts() const noexcept;
    /// Throws DataError for an unknown arm name.
    ArmId arm_index(const std::string &name) const;

    /// Throws DataError naming the first row lacking a metric that `mode`
    /// requires.
    void require_mode(RewardMode mode) const;

  private:
    ReplayHeader header_;
    std::vector<ReplayRow> rows_;
};

std::vector<LogViolation> find_violations(const ReplayHeader &header, const std::vector<ReplayRow> &rows);

struct LogCheckResult {
    std::vector<LogViolation> violations;
    std::optional<ReplayDataset> dataset; ///< set only when there are no violations

    bool ok() const noexcept { return violations.empty(); }
};

/// Parses line-delimited JSON and collects every violation rather than
/// stopping at the first one.
LogCheckResult check_replay_log(std::istream &in);
LogCheckResult check_replay_log_file(const std::filesystem::path &path);

/// Throws DataError with row-numbered violations (at most 20 listed).
ReplayDataset read_replay_log(const std::filesystem::path &path);

void write_replay_log(std::ostream &out, const ReplayDataset &dataset);

} // namespace banditmt
