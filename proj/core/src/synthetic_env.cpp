#include "banditmt/synthetic_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "banditmt/error.hpp"
#include "banditmt/linalg.hpp"

namespace banditmt {

namespace {

constexpr std::uint64_t kContextStream = 21;
constexpr std::uint64_t kRewardStream = 22;
constexpr std::uint64_t kPolicyStream = 23;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

} // namespace

std::string_view to_string(SyntheticKind kind) noexcept {
    return kind == SyntheticKind::bernoulli ? "bernoulli" : "linear_gaussian";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
    if (name == "bernoulli") return SyntheticKind::bernoulli;
    if (name == "linear_gaussian") return SyntheticKind::linear_gaussian;
    throw ConfigError("unknown synthetic kind '" + std::string(name) + "' (expected bernoulli or linear_gaussian)");
}

std::string_view to_string(ContextDistribution d) noexcept {
    return d == ContextDistribution::gaussian ? "gaussian" : "half_gaussian";
}

ContextDistribution parse_context_distribution(std::string_view name) {
    if (name == "gaussian") return ContextDistribution::gaussian;
    if (name == "half_gaussian") return ContextDistribution::half_gaussian;
    throw ConfigError("unknown context distribution '" + std::string(name) + "' (expected gaussian or half_gaussian)");
}

std::size_t SyntheticSpec::num_arms() const noexcept {
    return kind == SyntheticKind::bernoulli ? probabilities.size() : thetas.size();
}

std::size_t SyntheticSpec::dim() const noexcept {
    return kind == SyntheticKind::linear_gaussian && !thetas.empty() ? thetas.front().size() : 0;
}

void SyntheticSpec::validate() const {
    if (horizon == 0) {
        throw ConfigError("synthetic.horizon: must be >= 1");
    }
    if (kind == SyntheticKind::bernoulli) {
        if (probabilities.empty()) {
            throw ConfigError("synthetic.probabilities: need at least one arm");
        }
        for (std::size_t a = 0; a < probabilities.size(); ++a) {
            if (!(probabilities[a] >= 0.0 && probabilities[a] <= 1.0)) {
                throw ConfigError("synthetic.probabilities[" + std::to_string(a) + "]: must be in [0, 1]");
            }
        }
        return;
    }
    if (thetas.empty()) {
        throw ConfigError("synthetic.thetas: need at least one arm");
    }
    const std::size_t d = thetas.front().size();
    if (d == 0) {
        throw ConfigError("synthetic.thetas[0]: must be non-empty");
    }
    for (std::size_t a = 0; a < thetas.size(); ++a) {
        if (thetas[a].size() != d) {
            throw ConfigError("synthetic.thetas[" + std::to_string(a) + "]: length differs from thetas[0]");
        }
        for (double v : thetas[a]) {
            if (!std::isfinite(v)) {
                throw ConfigError("synthetic.thetas[" + std::to_string(a) + "]: entries must be finite");
            }
        }
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ConfigError("synthetic.noise_sd: must be a finite value >= 0");
    }
}

double clamped_gaussian_mean(double mean, double sd) {
    if (sd == 0.0) {
        return std::clamp(mean, 0.0, 1.0);
    }
    // E[Y 1{0<Y<1}] + P(Y >= 1)
    const double lo = (0.0 - mean) / sd;
    const double hi = (1.0 - mean) / sd;
    const double inside = mean * (normal_cdf(hi) - normal_cdf(lo)) + sd * (normal_pdf(lo) - normal_pdf(hi));
    return std::clamp(inside + (1.0 - normal_cdf(hi)), 0.0, 1.0);
}

SyntheticEnvironment::SyntheticEnvironment(SyntheticSpec spec)
    : spec_(std::move(spec)), context_rng_(mix_seed(spec_.seed, kContextStream)),
      reward_rng_(mix_seed(spec_.seed, kRewardStream)) {
    spec_.validate();
}

std::vector<double> SyntheticEnvironment::draw_context() {
    const std::size_t d = spec_.dim();
    std::vector<double> x(d);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto &v : x) {
            v = context_rng_.gaussian();
            if (spec_.contexts == ContextDistribution::half_gaussian) {
                v = std::abs(v);
            }
            norm2 += v * v;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &v : x) {
        v *= inv;
    }
    return x;
}

RoundRecord SyntheticEnvironment::step(Policy &policy, RngStream &policy_rng) {
    if (policy.num_arms() != spec_.num_arms()) {
        throw DataError("policy has " + std::to_string(policy.num_arms()) + " arms but the world has " +
                        std::to_string(spec_.num_arms()));
    }
    if (policy.contextual() && policy.context_dim() != spec_.dim()) {
        throw DataError("policy context dimension " + std::to_string(policy.context_dim()) +
                        " differs from the world's " + std::to_string(spec_.dim()));
    }
    const std::size_t k = spec_.num_arms();
    RoundRecord record;
    record.t = ++t_;
    record.phase = Phase::synthetic;
    record.per_arm_rewards.resize(k);
    record.expected_rewards.resize(k);

    ContextView context;
    if (spec_.kind == SyntheticKind::bernoulli) {
        for (std::size_t a = 0; a < k; ++a) {
            const double p = spec_.probabilities[a];
            record.expected_rewards[a] = p;
            record.per_arm_rewards[a] = reward_rng_.uniform() < p ? 1.0 : 0.0;
        }
    } else {
        record.context = ContextVector(draw_context());
        context = record.context->view();
        for (std::size_t a = 0; a < k; ++a) {
            const double mean = linalg::dot(spec_.thetas[a], context);
            record.expected_rewards[a] = clamped_gaussian_mean(mean, spec_.noise_sd);
            const double noisy = mean + spec_.noise_sd * reward_rng_.gaussian();
            record.per_arm_rewards[a] = std::clamp(noisy, 0.0, 1.0);
        }
    }

    record.chosen = policy.select(context, policy_rng);
    record.reward = RewardSignal(record.per_arm_rewards[record.chosen.value()]);
    policy.update(record.chosen, context, record.reward);
    return record;
}

std::vector<RoundRecord> SyntheticEnvironment::run(Policy &policy, RngStream &policy_rng) {
    std::vector<RoundRecord> records;
    records.reserve(spec_.horizon - std::min<std::uint64_t>(t_, spec_.horizon));
    while (t_ < spec_.horizon) {
        records.push_back(step(policy, policy_rng));
    }
    return records;
}

std::vector<RoundRecord> run_synthetic(Policy &policy, const SyntheticSpec &spec) {
    SyntheticEnvironment env(spec);
    RngStream policy_rng(mix_seed(spec.seed, kPolicyStream));
    return env.run(policy, policy_rng);
}

} // namespace banditmt
