#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "banditmt/linucb.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/policy.hpp"
#include "banditmt/ucb.hpp"

namespace banditmt {

/// Resolved parameters for one policy kind. Only the block matching `kind`
/// is meaningful.
struct PolicySpec {
    PolicyKind kind = PolicyKind::ucb;
    UcbConfig ucb;
    LinUcbConfig linucb;
    NeuralLinUcbConfig neural;
};

/// Parses a per-kind parameter block, applying defaults for missing fields.
/// Unknown fields and bad values raise ConfigError naming `path.field`.
PolicySpec parse_policy_spec(PolicyKind kind, const nlohmann::json &params, const std::string &path);

/// Fully resolved parameters (defaults included), for config digests.
nlohmann::json to_json(const PolicySpec &spec);

/// `dim` is ignored by context-free kinds; `seed` feeds network init and
/// training shuffles for neural_linucb.
std::unique_ptr<Policy> make_policy(const PolicySpec &spec, std::size_t num_arms, std::size_t dim,
                                    std::uint64_t seed);

} // namespace banditmt
