#include "banditmt/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banditmt/error.hpp"
#include "banditmt/replay_log.hpp"

namespace banditmt {

void MetricScores::validate() const {
    if (!bleu && !comet && !cometkiwi) {
        throw DataError("no metric present");
    }
    auto finite = [](const std::optional<double> &v, const char *name) {
        if (v && !std::isfinite(*v)) {
            throw DataError(std::string(name) + " is not finite");
        }
    };
    finite(bleu, "bleu");
    finite(comet, "comet");
    finite(cometkiwi, "cometkiwi");
    if (bleu && (*bleu < 0.0 || *bleu > 100.0)) {
        throw DataError("bleu " + std::to_string(*bleu) + " outside [0, 100]");
    }
}

std::string_view to_string(RewardMode mode) noexcept {
    return mode == RewardMode::reference_based ? "reference_based" : "target_free";
}

RewardMode parse_reward_mode(std::string_view name) {
    if (name == "reference_based") return RewardMode::reference_based;
    if (name == "target_free") return RewardMode::target_free;
    throw ConfigError("unknown reward mode '" + std::string(name) + "' (expected reference_based or target_free)");
}

double AffineNormalization::apply(double raw) const noexcept {
    return std::clamp(scale * raw + offset, 0.0, 1.0);
}

void RewardConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ConfigError("reward.lambda: must be in [0, 1]");
    }
    auto check = [](const AffineNormalization &n, const char *name) {
        if (!(n.scale >= 0.0) || !std::isfinite(n.scale)) {
            throw ConfigError(std::string("reward.normalization.") + name + ".scale: must be a finite value >= 0");
        }
        if (!std::isfinite(n.offset)) {
            throw ConfigError(std::string("reward.normalization.") + name + ".offset: must be finite");
        }
    };
    check(bleu, "bleu");
    check(comet, "comet");
    check(cometkiwi, "cometkiwi");
}

RewardSignal combine_reward(const MetricScores &scores, const RewardConfig &config) {
    switch (config.mode) {
    case RewardMode::reference_based: {
        if (!scores.bleu || !scores.comet) {
            throw DataError("reference_based reward needs both bleu and comet");
        }
        const double value =
            config.lambda * config.bleu.apply(*scores.bleu) + (1.0 - config.lambda) * config.comet.apply(*scores.comet);
        // Convex combination of values in [0, 1]; clamp only guards the last ulp.
        return RewardSignal(std::clamp(value, 0.0, 1.0));
    }
    case RewardMode::target_free:
        if (!scores.cometkiwi) {
            throw DataError("target_free reward needs cometkiwi");
        }
        return RewardSignal(config.cometkiwi.apply(*scores.cometkiwi));
    }
    throw std::logic_error("unreachable reward mode");
}

LogRewardProvider::LogRewardProvider(const ReplayDataset &dataset) : dataset_(&dataset) {
    for (std::size_t i = 0; i < dataset.rows().size(); ++i) {
        rows_.emplace(dataset.rows()[i].sentence_id, i);
    }
}

std::size_t LogRewardProvider::num_arms() const noexcept { return dataset_->num_arms(); }

const MetricScores &LogRewardProvider::get(std::string_view sentence_id, ArmId arm) const {
    const auto it = rows_.find(std::string(sentence_id));
    if (it == rows_.end()) {
        throw DataError("unknown sentence_id '" + std::string(sentence_id) + "'");
    }
    const auto &scores = dataset_->rows()[it->second].scores;
    if (arm.value() >= scores.size()) {
        throw std::out_of_range("arm " + std::to_string(arm.value()) + " out of range for a log with " +
                                std::to_string(scores.size()) + " arms");
    }
    return scores[arm.value()];
}

} // namespace banditmt
