#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "banditmt/rng.hpp"
#include "banditmt/types.hpp"

namespace banditmt {

enum class PolicyKind { ucb, thompson, linucb, neural_linucb };

std::string_view to_string(PolicyKind kind) noexcept;
/// Accepts "ucb", "ts"/"thompson", "linucb", "neural_linucb"/"nl".
/// Throws ConfigError for anything else.
PolicyKind parse_policy_kind(std::string_view name);

/// Version of the snapshot document layout written by Policy::snapshot().
inline constexpr int kSnapshotVersion = 1;

/// A bandit policy over K arms.
///
/// Selection and update are separate so an environment can observe every
/// arm's counterfactual reward between the two. select() is const: it never
/// touches sufficient statistics, and all randomness comes from the caller's
/// stream. Instances are single-threaded but movable across threads.
///
/// Context-free policies ignore any context they are given; contextual
/// policies reject an empty or wrongly-sized one.
class Policy {
  public:
    explicit Policy(std::size_t num_arms);
    virtual ~Policy() = default;

    Policy(const Policy &) = default;
    Policy &operator=(const Policy &) = default;
    Policy(Policy &&) noexcept = default;
    Policy &operator=(Policy &&) noexcept = default;

    virtual PolicyKind kind() const noexcept = 0;

    std::size_t num_arms() const noexcept { return num_arms_; }
    /// Context dimension for contextual policies, 0 otherwise.
    virtual std::size_t context_dim() const noexcept { return 0; }
    bool contextual() const noexcept { return context_dim() > 0; }

    /// Number of update() calls applied so far.
    std::uint64_t update_count() const noexcept { return updates_; }

    ArmId select(ContextView context, RngStream &rng) const;
    void update(ArmId arm, ContextView context, RewardSignal reward);

    /// JSON document: {"policy_kind", "version", "num_arms", "updates", "state"}.
    nlohmann::json snapshot() const;

    virtual std::unique_ptr<Policy> clone() const = 0;

  protected:
    virtual ArmId do_select(ContextView context, RngStream &rng) const = 0;
    virtual void do_update(ArmId arm, ContextView context, RewardSignal reward) = 0;
    virtual nlohmann::json state_json() const = 0;

    void set_update_count(std::uint64_t n) noexcept { updates_ = n; }

  private:
    friend std::unique_ptr<Policy> restore_policy(const nlohmann::json &);
    void check_context(ContextView context) const;

    std::size_t num_arms_;
    std::uint64_t updates_ = 0;
};

/// Rebuilds a policy from a snapshot() document. Throws DataError on a
/// malformed or version-mismatched document.
std::unique_ptr<Policy> restore_policy(const nlohmann::json &snapshot);

/// Index of the largest score; exact ties are broken uniformly at random
/// with `rng`. The stream is consumed only when a tie exists.
ArmId argmax_random_tie(std::span<const double> scores, RngStream &rng);

} // namespace banditmt
