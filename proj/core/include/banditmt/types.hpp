#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace banditmt {

/// Read-only view of a context; an empty view means "no context".
using ContextView = std::span<const double>;

/// Index of one candidate system in the arm pool.
class ArmId {
  public:
    constexpr ArmId() = default;
    constexpr explicit ArmId(std::size_t index) : index_(index) {}

    constexpr std::size_t value() const noexcept { return index_; }

    friend constexpr auto operator<=>(ArmId, ArmId) = default;

  private:
    std::size_t index_ = 0;
};

/// Scalar reward in [0, 1]. Construction rejects anything outside the range
/// (including NaN) with DataError; values are never silently clipped.
class RewardSignal {
  public:
    explicit RewardSignal(double value);

    double value() const noexcept { return value_; }

    friend auto operator<=>(RewardSignal, RewardSignal) = default;

  private:
    double value_;
};

/// Fixed-dimension feature vector for one source sentence. Every entry is
/// finite; construction throws DataError otherwise.
class ContextVector {
  public:
    ContextVector() = default;
    explicit ContextVector(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    ContextView view() const noexcept { return values_; }
    const std::vector<double> &values() const noexcept { return values_; }

    friend bool operator==(const ContextVector &, const ContextVector &) = default;

  private:
    std::vector<double> values_;
};

enum class Phase { explore, test, synthetic };

std::string_view to_string(Phase phase) noexcept;
Phase parse_phase(std::string_view name);

/// One bandit round as seen by analysis code.
struct RoundRecord {
    std::uint64_t t = 0; ///< 1-based round index within a run
    std::optional<ContextVector> context;
    ArmId chosen;
    RewardSignal reward{0.0};
    /// Realized reward of every arm this round (replay and synthetic worlds).
    std::vector<double> per_arm_rewards;
    /// Expected reward of every arm (synthetic worlds only); regret prefers it.
    std::vector<double> expected_rewards;
    /// Dataset row that produced this round (replay only).
    std::optional<std::size_t> row;
    Phase phase = Phase::synthetic;
};

/// Checks the per-record invariants (per-arm vector lengths, chosen entry
/// matching the observed reward). Throws DataError on violation.
void validate_record(const RoundRecord &record, std::size_t num_arms);

} // namespace banditmt
