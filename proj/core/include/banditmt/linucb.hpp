#pragma once

#include <cstddef>
#include <vector>

#include "banditmt/linalg.hpp"
#include "banditmt/policy.hpp"

namespace banditmt {

struct LinUcbConfig {
    double alpha = 1.5; ///< exploration coefficient
    double ridge = 1.0; ///< A_a starts at ridge * I
};

/// Per-arm ridge-regression statistics. A^{-1} is maintained directly;
/// theta = A^{-1} b is cached after every update.
struct LinUcbArm {
    linalg::SymMatrix a_inv;
    linalg::Vector b;
    linalg::Vector theta;
};

/// Disjoint-arm LinUCB statistics, independent of where features come from.
/// Used directly by LinUcbPolicy and as the head of NeuralLinUcbPolicy.
class LinUcbModel {
  public:
    LinUcbModel() = default;
    LinUcbModel(std::size_t num_arms, std::size_t dim, LinUcbConfig config);

    std::size_t num_arms() const noexcept { return arms_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const LinUcbConfig &config() const noexcept { return config_; }
    const LinUcbArm &arm(ArmId a) const { return arms_.at(a.value()); }

    double predict(ArmId a, std::span<const double> x) const;
    /// sqrt(x^T A_a^{-1} x), without the alpha factor.
    double width(ArmId a, std::span<const double> x) const;
    /// predict + alpha * width.
    double score(ArmId a, std::span<const double> x) const;

    ArmId select(std::span<const double> x, RngStream &rng) const;
    void update(ArmId a, std::span<const double> x, double reward);

    /// Drops all observations: A_a = ridge * I, b_a = 0.
    void reset();

    nlohmann::json to_json() const;
    static LinUcbModel from_json(const nlohmann::json &j);

    friend bool operator==(const LinUcbModel &, const LinUcbModel &);

  private:
    std::size_t dim_ = 0;
    LinUcbConfig config_;
    std::vector<LinUcbArm> arms_;
};

bool operator==(const LinUcbArm &a, const LinUcbArm &b);

/// LinUCB over raw contexts: argmax_a x^T theta_a + alpha sqrt(x^T A_a^{-1} x).
class LinUcbPolicy final : public Policy {
  public:
    LinUcbPolicy(std::size_t num_arms, std::size_t dim, LinUcbConfig config = {});
    explicit LinUcbPolicy(LinUcbModel model);

    PolicyKind kind() const noexcept override { return PolicyKind::linucb; }
    std::size_t context_dim() const noexcept override { return model_.dim(); }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<LinUcbPolicy>(*this); }

    const LinUcbModel &model() const noexcept { return model_; }

    static LinUcbPolicy from_json(const nlohmann::json &state);

  protected:
    ArmId do_select(ContextView context, RngStream &rng) const override;
    void do_update(ArmId arm, ContextView context, RewardSignal reward) override;
    nlohmann::json state_json() const override;

  private:
    LinUcbModel model_;
};

} // namespace banditmt
