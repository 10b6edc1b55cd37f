#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "banditmt/policy.hpp"

namespace banditmt {

enum class SyntheticKind { bernoulli, linear_gaussian };

/// How linear-Gaussian contexts are drawn before rescaling to unit norm.
enum class ContextDistribution {
    gaussian,      ///< z ~ N(0, I)
    half_gaussian, ///< |z| with z ~ N(0, I): all entries nonnegative
};

std::string_view to_string(SyntheticKind kind) noexcept;
SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(ContextDistribution d) noexcept;
ContextDistribution parse_context_distribution(std::string_view name);

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::bernoulli;
    std::vector<double> probabilities;        ///< bernoulli: success probability per arm
    std::vector<std::vector<double>> thetas;  ///< linear_gaussian: true parameter per arm
    ContextDistribution contexts = ContextDistribution::gaussian;
    double noise_sd = 0.0;
    std::size_t horizon = 1000;
    std::uint64_t seed = 0;

    std::size_t num_arms() const noexcept;
    /// Context dimension; 0 for bernoulli.
    std::size_t dim() const noexcept;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// E[clamp(Y, 0, 1)] for Y ~ N(mean, sd^2); clamp(mean, 0, 1) when sd == 0.
double clamped_gaussian_mean(double mean, double sd);

/// Simulated world with known reward distributions.
///
/// Each round every arm's reward is realized (Bernoulli(p_a), or
/// clamp(x.theta_a + N(0, sd^2), 0, 1)); records carry both the realized
/// and the expected per-arm rewards so regret can be computed exactly.
class SyntheticEnvironment {
  public:
    explicit SyntheticEnvironment(SyntheticSpec spec);

    const SyntheticSpec &spec() const noexcept { return spec_; }
    std::uint64_t rounds_played() const noexcept { return t_; }

    RoundRecord step(Policy &policy, RngStream &policy_rng);
    /// Plays the remaining rounds up to the horizon.
    std::vector<RoundRecord> run(Policy &policy, RngStream &policy_rng);

  private:
    std::vector<double> draw_context();

    SyntheticSpec spec_;
    RngStream context_rng_;
    RngStream reward_rng_;
    std::uint64_t t_ = 0;
};

/// Full horizon with the policy stream derived from spec.seed.
std::vector<RoundRecord> run_synthetic(Policy &policy, const SyntheticSpec &spec);

} // namespace banditmt
