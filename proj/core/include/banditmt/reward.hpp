#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "banditmt/bleu.hpp"
#include "banditmt/types.hpp"

namespace banditmt {

/// Raw metric values for one (sentence, system) pair.
/// BLEU is on the usual 0..100 scale; COMET and CometKiwi are raw model
/// outputs.
struct MetricScores {
    std::optional<double> bleu;
    std::optional<double> comet;
    std::optional<double> cometkiwi;

    /// Throws DataError unless at least one metric is present, every present
    /// value is finite and BLEU lies in [0, 100].
    void validate() const;

    friend bool operator==(const MetricScores &, const MetricScores &) = default;
};

enum class RewardMode {
    reference_based, ///< lambda * BLEU + (1 - lambda) * COMET
    target_free,     ///< CometKiwi alone
};

std::string_view to_string(RewardMode mode) noexcept;
RewardMode parse_reward_mode(std::string_view name);

/// value -> clamp(scale * value + offset, 0, 1). scale must be >= 0 so the
/// map is monotone non-decreasing.
struct AffineNormalization {
    double scale = 1.0;
    double offset = 0.0;

    double apply(double raw) const noexcept;
};

struct RewardConfig {
    double lambda = 0.4;
    RewardMode mode = RewardMode::reference_based;
    AffineNormalization bleu{0.01, 0.0};
    AffineNormalization comet{1.0, 0.0};
    AffineNormalization cometkiwi{1.0, 0.0};
    TokenizerKind tokenizer = TokenizerKind::whitespace_punct;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Throws DataError when a metric required by `config.mode` is absent.
RewardSignal combine_reward(const MetricScores &scores, const RewardConfig &config);

/// Source of per-(sentence, arm) metric scores.
class RewardProvider {
  public:
    virtual ~RewardProvider() = default;
    virtual std::size_t num_arms() const noexcept = 0;
    /// Throws DataError for an unknown sentence id and std::out_of_range for
    /// an arm outside the provider's pool.
    virtual const MetricScores &get(std::string_view sentence_id, ArmId arm) const = 0;
};

class ReplayDataset;

/// Provider over recorded score logs. Holds a reference to the dataset.
class LogRewardProvider final : public RewardProvider {
  public:
    explicit LogRewardProvider(const ReplayDataset &dataset);

    std::size_t num_arms() const noexcept override;
    const MetricScores &get(std::string_view sentence_id, ArmId arm) const override;

  private:
    const ReplayDataset *dataset_;
    std::unordered_map<std::string, std::size_t> rows_;
};

} // namespace banditmt
