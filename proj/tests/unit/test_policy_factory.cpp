#include <doctest.h>

#include "banditmt/error.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/policy_factory.hpp"

using namespace banditmt;
using nlohmann::json;

namespace {

std::string config_error(PolicyKind kind, const json &params) {
    try {
        parse_policy_spec(kind, params, "policy_params.x");
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("defaults resolve to the documented values") {
    const auto ucb = parse_policy_spec(PolicyKind::ucb, json::object(), "p");
    CHECK(ucb.ucb.alpha == 0.5);
    const auto lin = parse_policy_spec(PolicyKind::linucb, json::object(), "p");
    CHECK(lin.linucb.alpha == 1.5);
    CHECK(lin.linucb.ridge == 1.0);
    const auto nl = parse_policy_spec(PolicyKind::neural_linucb, json::object(), "p");
    CHECK(nl.neural.hidden == std::vector<std::size_t>{50, 50});
    CHECK(nl.neural.latent_dim == 50);
    CHECK(nl.neural.train_every == 32);
    CHECK(nl.neural.epochs == 5);
    CHECK(nl.neural.batch_size == 16);
    CHECK(nl.neural.learning_rate == 1e-3);
    CHECK(nl.neural.buffer_capacity == 4096);
    CHECK(to_json(nl)["params"]["activation"] == "tanh");
}

TEST_CASE("parameters override defaults") {
    const auto nl = parse_policy_spec(PolicyKind::neural_linucb,
                                      json{{"hidden", json::array({8})}, {"latent_dim", 4}, {"epochs", 2}, {"activation", "identity"}},
                                      "p");
    CHECK(nl.neural.hidden == std::vector<std::size_t>{8});
    CHECK(nl.neural.latent_dim == 4);
    CHECK(nl.neural.activation == Activation::identity);
    CHECK(to_json(nl)["params"]["epochs"] == 2);
}

TEST_CASE("errors name the field") {
    CHECK(config_error(PolicyKind::ucb, json{{"alpha", -1}}) == "policy_params.x.alpha: must be >= 0");
    CHECK(config_error(PolicyKind::ucb, json{{"alpah", 1}}) == "policy_params.x.alpah: unknown parameter");
    CHECK(config_error(PolicyKind::ucb, json{{"alpha", "big"}}) == "policy_params.x.alpha: expected a number");
    CHECK(config_error(PolicyKind::linucb, json{{"ridge", 0}}) == "policy_params.x.ridge: must be > 0");
    CHECK(config_error(PolicyKind::thompson, json{{"prior", 1}}) == "policy_params.x.prior: unknown parameter");
    CHECK(config_error(PolicyKind::neural_linucb, json{{"hidden", {50, 0}}}).rfind("policy_params.x.hidden", 0) == 0);
    CHECK(config_error(PolicyKind::neural_linucb, json{{"epochs", -1}}) ==
          "policy_params.x.epochs: expected a nonnegative integer");
    CHECK(config_error(PolicyKind::neural_linucb, json{{"activation", "relu"}}).rfind("policy_params.x.activation", 0) ==
          0);
    CHECK(config_error(PolicyKind::ucb, json::array()) == "policy_params.x: expected an object");
}

TEST_CASE("make_policy builds each kind and refuses contextual kinds without contexts") {
    for (auto kind : {PolicyKind::ucb, PolicyKind::thompson}) {
        const auto p = make_policy(parse_policy_spec(kind, json::object(), "p"), 3, 0, 1);
        CHECK(p->kind() == kind);
        CHECK(p->num_arms() == 3);
    }
    for (auto kind : {PolicyKind::linucb, PolicyKind::neural_linucb}) {
        const auto spec = parse_policy_spec(kind, json::object(), "p");
        CHECK_THROWS_AS(make_policy(spec, 3, 0, 1), DataError);
        const auto p = make_policy(spec, 3, 4, 1);
        CHECK(p->kind() == kind);
        CHECK(p->context_dim() == 4);
    }
}

TEST_CASE("neural seeds control initialization") {
    const auto spec = parse_policy_spec(PolicyKind::neural_linucb, json::object(), "p");
    const auto a = make_policy(spec, 2, 3, 7);
    const auto b = make_policy(spec, 2, 3, 7);
    const auto c = make_policy(spec, 2, 3, 8);
    CHECK(a->snapshot() == b->snapshot());
    CHECK(a->snapshot() != c->snapshot());
}
