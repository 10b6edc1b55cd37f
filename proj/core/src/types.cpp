#include "banditmt/types.hpp"

#include <cmath>
#include <string>

#include "banditmt/error.hpp"

namespace banditmt {

RewardSignal::RewardSignal(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DataError("reward " + std::to_string(value) + " outside [0, 1]");
    }
}

ContextVector::ContextVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("context entry " + std::to_string(i) + " is not finite");
        }
    }
}

std::string_view to_string(Phase phase) noexcept {
    switch (phase) {
    case Phase::explore:
        return "explore";
    case Phase::test:
        return "test";
    case Phase::synthetic:
        return "synthetic";
    }
    return "synthetic";
}

Phase parse_phase(std::string_view name) {
    if (name == "explore") return Phase::explore;
    if (name == "test") return Phase::test;
    if (name == "synthetic") return Phase::synthetic;
    throw DataError("unknown phase '" + std::string(name) + "'");
}

void validate_record(const RoundRecord &record, std::size_t num_arms) {
    if (record.chosen.value() >= num_arms) {
        throw DataError("round " + std::to_string(record.t) + ": chosen arm out of range");
    }
    if (!record.per_arm_rewards.empty()) {
        if (record.per_arm_rewards.size() != num_arms) {
            throw DataError("round " + std::to_string(record.t) + ": per-arm rewards length mismatch");
        }
        const double seen = record.per_arm_rewards[record.chosen.value()];
        if (std::abs(seen - record.reward.value()) > 1e-12) {
            throw DataError("round " + std::to_string(record.t) +
                            ": chosen arm's per-arm reward differs from observed reward");
        }
    }
    if (!record.expected_rewards.empty() && record.expected_rewards.size() != num_arms) {
        throw DataError("round " + std::to_string(record.t) + ": expected rewards length mismatch");
    }
}

} // namespace banditmt
