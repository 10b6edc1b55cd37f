#include "banditmt/linucb.hpp"

#include <cmath>
#include <stdexcept>

#include "banditmt/error.hpp"

namespace banditmt {

bool operator==(const LinUcbArm &a, const LinUcbArm &b) {
    return a.a_inv == b.a_inv && a.b == b.b && a.theta == b.theta;
}

bool operator==(const LinUcbModel &a, const LinUcbModel &b) {
    return a.dim_ == b.dim_ && a.config_.alpha == b.config_.alpha && a.config_.ridge == b.config_.ridge &&
           a.arms_ == b.arms_;
}

LinUcbModel::LinUcbModel(std::size_t num_arms, std::size_t dim, LinUcbConfig config)
    : dim_(dim), config_(config), arms_(num_arms) {
    if (dim == 0) {
        throw ConfigError("linucb: context dimension must be positive");
    }
    if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha)) {
        throw ConfigError("linucb.alpha: must be a finite value >= 0");
    }
    if (!(config.ridge > 0.0) || !std::isfinite(config.ridge)) {
        throw ConfigError("linucb.ridge: must be a finite value > 0");
    }
    reset();
}

void LinUcbModel::reset() {
    for (auto &arm : arms_) {
        arm.a_inv = linalg::SymMatrix::identity(dim_, 1.0 / config_.ridge);
        arm.b.assign(dim_, 0.0);
        arm.theta.assign(dim_, 0.0);
    }
}

double LinUcbModel::predict(ArmId a, std::span<const double> x) const {
    return linalg::dot(arm(a).theta, x);
}

double LinUcbModel::width(ArmId a, std::span<const double> x) const {
    return std::sqrt(linalg::quad_form(arm(a).a_inv, x));
}

double LinUcbModel::score(ArmId a, std::span<const double> x) const {
    return predict(a, x) + config_.alpha * width(a, x);
}

ArmId LinUcbModel::select(std::span<const double> x, RngStream &rng) const {
    std::vector<double> scores(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        scores[a] = score(ArmId(a), x);
    }
    return argmax_random_tie(scores, rng);
}

void LinUcbModel::update(ArmId a, std::span<const double> x, double reward) {
    auto &s = arms_.at(a.value());
    linalg::rank1_inverse_update(s.a_inv, x);
    for (std::size_t i = 0; i < dim_; ++i) {
        s.b[i] += reward * x[i];
    }
    s.theta = s.a_inv.multiply(s.b);
}

nlohmann::json LinUcbModel::to_json() const {
    nlohmann::json arms = nlohmann::json::array();
    for (const auto &s : arms_) {
        arms.push_back({{"a_inv", std::vector<double>(s.a_inv.data().begin(), s.a_inv.data().end())},
                        {"b", s.b},
                        {"theta", s.theta}});
    }
    return {{"alpha", config_.alpha}, {"ridge", config_.ridge}, {"dim", dim_}, {"arms", arms}};
}

LinUcbModel LinUcbModel::from_json(const nlohmann::json &j) {
    LinUcbModel m(j.at("arms").size(), j.at("dim").get<std::size_t>(),
                  {j.at("alpha").get<double>(), j.at("ridge").get<double>()});
    if (m.arms_.empty()) {
        throw DataError("linucb snapshot: no arms");
    }
    for (std::size_t a = 0; a < m.arms_.size(); ++a) {
        const auto &ja = j.at("arms").at(a);
        auto &s = m.arms_[a];
        try {
            s.a_inv = linalg::SymMatrix::from_rows(m.dim_, ja.at("a_inv").get<std::vector<double>>());
        } catch (const std::invalid_argument &e) {
            throw DataError(std::string("linucb snapshot: ") + e.what());
        }
        s.b = ja.at("b").get<std::vector<double>>();
        s.theta = ja.at("theta").get<std::vector<double>>();
        if (s.b.size() != m.dim_ || s.theta.size() != m.dim_) {
            throw DataError("linucb snapshot: vector length does not match dim");
        }
    }
    return m;
}

LinUcbPolicy::LinUcbPolicy(std::size_t num_arms, std::size_t dim, LinUcbConfig config)
    : Policy(num_arms), model_(num_arms, dim, config) {}

LinUcbPolicy::LinUcbPolicy(LinUcbModel model) : Policy(model.num_arms()), model_(std::move(model)) {}

ArmId LinUcbPolicy::do_select(ContextView context, RngStream &rng) const { return model_.select(context, rng); }

void LinUcbPolicy::do_update(ArmId arm, ContextView context, RewardSignal reward) {
    model_.update(arm, context, reward.value());
}

nlohmann::json LinUcbPolicy::state_json() const { return model_.to_json(); }

LinUcbPolicy LinUcbPolicy::from_json(const nlohmann::json &j) { return LinUcbPolicy(LinUcbModel::from_json(j)); }

} // namespace banditmt
