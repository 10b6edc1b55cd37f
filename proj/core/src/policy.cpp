#include "banditmt/policy.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "banditmt/error.hpp"
#include "banditmt/linucb.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/thompson.hpp"
#include "banditmt/ucb.hpp"

namespace banditmt {

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
    case PolicyKind::ucb:
        return "ucb";
    case PolicyKind::thompson:
        return "ts";
    case PolicyKind::linucb:
        return "linucb";
    case PolicyKind::neural_linucb:
        return "neural_linucb";
    }
    return "ucb";
}

PolicyKind parse_policy_kind(std::string_view name) {
    if (name == "ucb") return PolicyKind::ucb;
    if (name == "ts" || name == "thompson") return PolicyKind::thompson;
    if (name == "linucb") return PolicyKind::linucb;
    if (name == "neural_linucb" || name == "nl") return PolicyKind::neural_linucb;
    throw ConfigError("unknown policy '" + std::string(name) +
                      "' (expected ucb, ts, linucb or neural_linucb)");
}

Policy::Policy(std::size_t num_arms) : num_arms_(num_arms) {
    if (num_arms == 0) {
        throw std::invalid_argument("policy needs at least one arm");
    }
}

void Policy::check_context(ContextView context) const {
    const std::size_t d = context_dim();
    if (d == 0) {
        return;
    }
    if (context.empty()) {
        throw DataError(std::string(to_string(kind())) + " is contextual but no context was given");
    }
    if (context.size() != d) {
        throw DataError("context dimension " + std::to_string(context.size()) +
                        " does not match policy dimension " + std::to_string(d));
    }
}

ArmId Policy::select(ContextView context, RngStream &rng) const {
    check_context(context);
    if (num_arms_ == 1) {
        return ArmId(0);
    }
    const ArmId arm = do_select(context, rng);
    if (arm.value() >= num_arms_) {
        throw StateError("policy selected an out-of-range arm");
    }
    return arm;
}

void Policy::update(ArmId arm, ContextView context, RewardSignal reward) {
    if (arm.value() >= num_arms_) {
        throw std::out_of_range("arm " + std::to_string(arm.value()) + " out of range for " +
                                std::to_string(num_arms_) + " arms");
    }
    check_context(context);
    do_update(arm, context, reward);
    ++updates_;
}

nlohmann::json Policy::snapshot() const {
    return {{"policy_kind", std::string(to_string(kind()))},
            {"version", kSnapshotVersion},
            {"num_arms", num_arms_},
            {"updates", updates_},
            {"state", state_json()}};
}

std::unique_ptr<Policy> restore_policy(const nlohmann::json &snapshot) {
    try {
        if (snapshot.at("version").get<int>() != kSnapshotVersion) {
            throw DataError("unsupported snapshot version " + snapshot.at("version").dump());
        }
        const auto kind = parse_policy_kind(snapshot.at("policy_kind").get<std::string>());
        const auto &state = snapshot.at("state");
        std::unique_ptr<Policy> policy;
        switch (kind) {
        case PolicyKind::ucb:
            policy = std::make_unique<UcbPolicy>(UcbPolicy::from_json(state));
            break;
        case PolicyKind::thompson:
            policy = std::make_unique<ThompsonPolicy>(ThompsonPolicy::from_json(state));
            break;
        case PolicyKind::linucb:
            policy = std::make_unique<LinUcbPolicy>(LinUcbPolicy::from_json(state));
            break;
        case PolicyKind::neural_linucb:
            policy = std::make_unique<NeuralLinUcbPolicy>(NeuralLinUcbPolicy::from_json(state));
            break;
        }
        if (policy->num_arms() != snapshot.at("num_arms").get<std::size_t>()) {
            throw DataError("snapshot num_arms disagrees with its state payload");
        }
        policy->set_update_count(snapshot.at("updates").get<std::uint64_t>());
        return policy;
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("malformed policy snapshot: ") + e.what());
    } catch (const ConfigError &e) {
        throw DataError(std::string("malformed policy snapshot: ") + e.what());
    }
}

ArmId argmax_random_tie(std::span<const double> scores, RngStream &rng) {
    if (scores.empty()) {
        throw std::invalid_argument("argmax over empty score list");
    }
    double best = scores[0];
    std::vector<std::size_t> ties{0};
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > best) {
            best = scores[i];
            ties.assign(1, i);
        } else if (scores[i] == best) {
            ties.push_back(i);
        }
    }
    if (ties.size() == 1) {
        return ArmId(ties.front());
    }
    return ArmId(ties[rng.uniform_index(ties.size())]);
}

} // namespace banditmt
