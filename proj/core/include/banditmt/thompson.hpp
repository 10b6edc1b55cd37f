#pragma once

#include <vector>

#include "banditmt/policy.hpp"

namespace banditmt {

/// Pseudo-counts per arm, both starting at 0 (the Beta(0,0) bookkeeping).
/// Each update adds r to alpha and 1 - r to beta, so alpha + beta equals the
/// arm's update count.
struct TsState {
    std::vector<double> alphas;
    std::vector<double> betas;
};

/// Beta-Bernoulli Thompson sampling with fractional reward updates.
///
/// Draws come from Beta(alpha + 1, beta + 1): the stored counts start at the
/// improper Beta(0,0) and a uniform prior is added at sampling time.
class ThompsonPolicy final : public Policy {
  public:
    explicit ThompsonPolicy(std::size_t num_arms);
    explicit ThompsonPolicy(TsState state);

    PolicyKind kind() const noexcept override { return PolicyKind::thompson; }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ThompsonPolicy>(*this); }

    const TsState &state() const noexcept { return state_; }

    static ThompsonPolicy from_json(const nlohmann::json &state);

  protected:
    ArmId do_select(ContextView context, RngStream &rng) const override;
    void do_update(ArmId arm, ContextView context, RewardSignal reward) override;
    nlohmann::json state_json() const override;

  private:
    TsState state_;
};

} // namespace banditmt
