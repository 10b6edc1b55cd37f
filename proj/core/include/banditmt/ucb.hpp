#pragma once

#include <cstdint>
#include <vector>

#include "banditmt/policy.hpp"

namespace banditmt {

struct UcbConfig {
    /// Exploration coefficient; the index is mean + alpha * sqrt(ln t / N).
    double alpha = 0.5;
};

/// Sufficient statistics for UCB. `t` counts completed updates, so after
/// cold start sum(counts) == t.
struct UcbState {
    double alpha = 0.5;
    std::vector<std::uint64_t> counts;
    std::vector<double> means;
    std::uint64_t t = 0;
};

/// Optimism-in-the-face-of-uncertainty index policy.
///
/// Cold start pulls every unpulled arm once, lowest index first. After that
/// it picks argmax of mean_a + alpha * sqrt(ln t / N_a) using the natural
/// log and t = number of rounds observed so far.
class UcbPolicy final : public Policy {
  public:
    UcbPolicy(std::size_t num_arms, UcbConfig config = {});
    explicit UcbPolicy(UcbState state);

    PolicyKind kind() const noexcept override { return PolicyKind::ucb; }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<UcbPolicy>(*this); }

    const UcbState &state() const noexcept { return state_; }

    /// Index of a pulled arm at the current t; throws if the arm has N = 0.
    double index(ArmId arm) const;
    /// The exploration width alpha * sqrt(ln t / n).
    static double width(double alpha, std::uint64_t t, std::uint64_t n);

    static UcbPolicy from_json(const nlohmann::json &state);

  protected:
    ArmId do_select(ContextView context, RngStream &rng) const override;
    void do_update(ArmId arm, ContextView context, RewardSignal reward) override;
    nlohmann::json state_json() const override;

  private:
    UcbState state_;
};

} // namespace banditmt
