#include "banditmt/ucb.hpp"

#include <cmath>
#include <stdexcept>

#include "banditmt/error.hpp"

namespace banditmt {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("ucb.alpha: must be a finite value >= 0");
    }
}

} // namespace

UcbPolicy::UcbPolicy(std::size_t num_arms, UcbConfig config)
    : Policy(num_arms), state_{config.alpha, std::vector<std::uint64_t>(num_arms, 0),
                               std::vector<double>(num_arms, 0.0), 0} {
    check_alpha(config.alpha);
}

UcbPolicy::UcbPolicy(UcbState state) : Policy(state.counts.size()), state_(std::move(state)) {
    check_alpha(state_.alpha);
    if (state_.means.size() != state_.counts.size()) {
        throw std::invalid_argument("UcbState: counts and means differ in length");
    }
}

double UcbPolicy::width(double alpha, std::uint64_t t, std::uint64_t n) {
    if (t <= 1) {
        return 0.0;
    }
    return alpha * std::sqrt(std::log(static_cast<double>(t)) / static_cast<double>(n));
}

double UcbPolicy::index(ArmId arm) const {
    const auto a = arm.value();
    if (state_.counts.at(a) == 0) {
        throw std::logic_error("UCB index undefined for an unpulled arm");
    }
    return state_.means[a] + width(state_.alpha, state_.t, state_.counts[a]);
}

ArmId UcbPolicy::do_select(ContextView, RngStream &rng) const {
    for (std::size_t a = 0; a < state_.counts.size(); ++a) {
        if (state_.counts[a] == 0) {
            return ArmId(a);
        }
    }
    std::vector<double> scores(state_.counts.size());
    for (std::size_t a = 0; a < scores.size(); ++a) {
        scores[a] = index(ArmId(a));
    }
    return argmax_random_tie(scores, rng);
}

void UcbPolicy::do_update(ArmId arm, ContextView, RewardSignal reward) {
    const auto a = arm.value();
    const auto n = ++state_.counts[a];
    state_.means[a] += (reward.value() - state_.means[a]) / static_cast<double>(n);
    ++state_.t;
}

nlohmann::json UcbPolicy::state_json() const {
    return {{"alpha", state_.alpha}, {"counts", state_.counts}, {"means", state_.means}, {"t", state_.t}};
}

UcbPolicy UcbPolicy::from_json(const nlohmann::json &j) {
    UcbState s;
    s.alpha = j.at("alpha").get<double>();
    s.counts = j.at("counts").get<std::vector<std::uint64_t>>();
    s.means = j.at("means").get<std::vector<double>>();
    s.t = j.at("t").get<std::uint64_t>();
    if (s.counts.empty() || s.counts.size() != s.means.size()) {
        throw DataError("ucb snapshot: counts/means length mismatch");
    }
    return UcbPolicy(std::move(s));
}

} // namespace banditmt
