#include "banditmt/thompson.hpp"

#include <stdexcept>

#include "banditmt/error.hpp"

namespace banditmt {

ThompsonPolicy::ThompsonPolicy(std::size_t num_arms)
    : Policy(num_arms), state_{std::vector<double>(num_arms, 0.0), std::vector<double>(num_arms, 0.0)} {}

ThompsonPolicy::ThompsonPolicy(TsState state) : Policy(state.alphas.size()), state_(std::move(state)) {
    if (state_.alphas.size() != state_.betas.size()) {
        throw std::invalid_argument("TsState: alphas and betas differ in length");
    }
    for (std::size_t a = 0; a < state_.alphas.size(); ++a) {
        if (!(state_.alphas[a] >= 0.0) || !(state_.betas[a] >= 0.0)) {
            throw std::invalid_argument("TsState: pseudo-counts must be nonnegative");
        }
    }
}

ArmId ThompsonPolicy::do_select(ContextView, RngStream &rng) const {
    std::vector<double> draws(state_.alphas.size());
    for (std::size_t a = 0; a < draws.size(); ++a) {
        draws[a] = rng.beta(state_.alphas[a] + 1.0, state_.betas[a] + 1.0);
    }
    return argmax_random_tie(draws, rng);
}

void ThompsonPolicy::do_update(ArmId arm, ContextView, RewardSignal reward) {
    const auto a = arm.value();
    state_.alphas[a] += reward.value();
    state_.betas[a] += 1.0 - reward.value();
}

nlohmann::json ThompsonPolicy::state_json() const {
    return {{"alphas", state_.alphas}, {"betas", state_.betas}};
}

ThompsonPolicy ThompsonPolicy::from_json(const nlohmann::json &j) {
    TsState s;
    s.alphas = j.at("alphas").get<std::vector<double>>();
    s.betas = j.at("betas").get<std::vector<double>>();
    if (s.alphas.empty() || s.alphas.size() != s.betas.size()) {
        throw DataError("ts snapshot: alphas/betas length mismatch");
    }
    return ThompsonPolicy(std::move(s));
}

} // namespace banditmt
