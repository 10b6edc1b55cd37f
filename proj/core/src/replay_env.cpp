#include "banditmt/replay_env.hpp"

#include <numeric>

#include "banditmt/error.hpp"

namespace banditmt {

namespace {

constexpr std::uint64_t kShuffleStream = 11;
constexpr std::uint64_t kPolicyStream = 12;

} // namespace

void ReplayOptions::validate(std::size_t dataset_rows) const {
    if (test_rows == 0) {
        throw ConfigError("environment.test: must be positive");
    }
    if (explore_rows + test_rows > dataset_rows) {
        throw DataError("explore (" + std::to_string(explore_rows) + ") + test (" + std::to_string(test_rows) +
                        ") rows exceed the log's " + std::to_string(dataset_rows) + " rows");
    }
}

ReplayEnvironment::ReplayEnvironment(const ReplayDataset &dataset, RewardConfig reward, ReplayOptions options,
                                     std::uint64_t seed)
    : dataset_(&dataset), reward_config_(reward), options_(options), shuffle_rng_(mix_seed(seed, kShuffleStream)) {
    reward_config_.validate();
    options_.validate(dataset.size());
    dataset.require_mode(reward_config_.mode);
    rewards_.reserve(dataset.size());
    for (const auto &row : dataset.rows()) {
        std::vector<double> per_arm;
        per_arm.reserve(row.scores.size());
        for (const auto &scores : row.scores) {
            per_arm.push_back(combine_reward(scores, reward_config_).value());
        }
        rewards_.push_back(std::move(per_arm));
    }
}

std::pair<std::size_t, std::size_t> ReplayEnvironment::split_range(Split split) const noexcept {
    if (split == Split::explore) {
        return {0, options_.explore_rows};
    }
    return {options_.explore_rows, options_.explore_rows + options_.test_rows};
}

void ReplayEnvironment::enqueue(Split split, std::size_t passes) {
    const auto [first, last] = split_range(split);
    std::vector<std::size_t> order(last - first);
    for (std::size_t p = 0; p < passes; ++p) {
        std::iota(order.begin(), order.end(), first);
        shuffle(order.begin(), order.end(), shuffle_rng_);
        for (std::size_t row : order) {
            queue_.push_back({row, split});
        }
    }
}

void ReplayEnvironment::check_policy(const Policy &policy) const {
    if (policy.num_arms() != dataset_->num_arms()) {
        throw DataError("policy has " + std::to_string(policy.num_arms()) + " arms but the log has " +
                        std::to_string(dataset_->num_arms()));
    }
    if (policy.contextual()) {
        if (!dataset_->has_contexts()) {
            throw DataError(std::string(to_string(policy.kind())) +
                            " needs contexts, but the log has none (header dim 0)");
        }
        if (policy.context_dim() != dataset_->dim()) {
            throw DataError("policy context dimension " + std::to_string(policy.context_dim()) +
                            " differs from the log's dim " + std::to_string(dataset_->dim()));
        }
    }
}

RoundRecord ReplayEnvironment::step(Policy &policy, RngStream &policy_rng) {
    if (queue_.empty()) {
        throw DataError("replay exhausted: no rows queued");
    }
    check_policy(policy);
    const Pending next = queue_.front();
    queue_.pop_front();
    const auto &row = dataset_->rows()[next.row];

    ContextView context;
    if (row.context) {
        context = row.context->view();
    }
    const ArmId arm = policy.select(context, policy_rng);
    const RewardSignal reward(rewards_[next.row][arm.value()]);
    const bool frozen = next.split == Split::test && options_.freeze_on_test;
    if (!frozen) {
        policy.update(arm, context, reward);
    }

    RoundRecord record;
    record.t = ++t_;
    record.context = row.context;
    record.chosen = arm;
    record.reward = reward;
    record.per_arm_rewards = rewards_[next.row];
    record.row = next.row;
    record.phase = next.split == Split::explore ? Phase::explore : Phase::test;
    return record;
}

std::vector<RoundRecord> ReplayEnvironment::run(Policy &policy, RngStream &policy_rng, Split split,
                                                std::size_t passes) {
    check_policy(policy);
    enqueue(split, passes);
    std::vector<RoundRecord> records;
    records.reserve(queue_.size());
    while (!queue_.empty()) {
        records.push_back(step(policy, policy_rng));
    }
    return records;
}

std::vector<RoundRecord> run_replay(Policy &policy, const ReplayDataset &dataset, const RewardConfig &reward,
                                    const ReplayOptions &options, std::uint64_t seed) {
    ReplayEnvironment env(dataset, reward, options, seed);
    env.check_policy(policy);
    RngStream policy_rng(mix_seed(seed, kPolicyStream));
    auto records = env.run(policy, policy_rng, Split::explore, options.explore_passes);
    auto test = env.run(policy, policy_rng, Split::test, 1);
    records.insert(records.end(), std::make_move_iterator(test.begin()), std::make_move_iterator(test.end()));
    return records;
}

} // namespace banditmt
