#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "banditmt/policy.hpp"
#include "banditmt/replay_log.hpp"
#include "banditmt/reward.hpp"

namespace banditmt {

enum class Split { explore, test };

/// Explore rows are the first `explore_rows` rows of the dataset, test rows
/// the next `test_rows`.
struct ReplayOptions {
    std::size_t explore_rows = 1000;
    std::size_t test_rows = 1000;
    std::size_t explore_passes = 1;
    bool freeze_on_test = false; ///< test rounds select but do not update

    void validate(std::size_t dataset_rows) const;
};

/// Offline environment that replays precomputed per-arm scores.
///
/// Rewards for every (row, arm) are combined once at construction, so every
/// emitted record carries all K counterfactual rewards.
class ReplayEnvironment {
  public:
    /// Throws DataError if any row lacks a metric required by the reward mode.
    ReplayEnvironment(const ReplayDataset &dataset, RewardConfig reward, ReplayOptions options, std::uint64_t seed);

    const ReplayDataset &dataset() const noexcept { return *dataset_; }
    const ReplayOptions &options() const noexcept { return options_; }
    double reward(std::size_t row, ArmId arm) const { return rewards_.at(row).at(arm.value()); }
    const std::vector<double> &rewards(std::size_t row) const { return rewards_.at(row); }

    /// Row indices [first, last) of a split.
    std::pair<std::size_t, std::size_t> split_range(Split split) const noexcept;

    /// Queues `passes` seeded shuffles of the split's rows.
    void enqueue(Split split, std::size_t passes);
    std::size_t pending() const noexcept { return queue_.size(); }

    /// Throws DataError when the policy does not fit this dataset (arm count,
    /// or a contextual policy on a context-free log). No rounds are consumed.
    void check_policy(const Policy &policy) const;

    /// Plays the next queued row: select, reward, update (unless frozen),
    /// record. Throws DataError when nothing is queued.
    RoundRecord step(Policy &policy, RngStream &policy_rng);

    /// enqueue(split, passes) followed by steps until the queue drains.
    std::vector<RoundRecord> run(Policy &policy, RngStream &policy_rng, Split split, std::size_t passes);

  private:
    struct Pending {
        std::size_t row;
        Split split;
    };

    const ReplayDataset *dataset_;
    RewardConfig reward_config_;
    ReplayOptions options_;
    RngStream shuffle_rng_;
    std::vector<std::vector<double>> rewards_;
    std::deque<Pending> queue_;
    std::uint64_t t_ = 0;
};

/// The explore-then-test protocol: `explore_passes` shuffled passes over the
/// explore split, then one shuffled pass over the test split. The policy
/// stream and shuffle stream are both derived from `seed`.
std::vector<RoundRecord> run_replay(Policy &policy, const ReplayDataset &dataset, const RewardConfig &reward,
                                    const ReplayOptions &options, std::uint64_t seed);

} // namespace banditmt
