#include <doctest.h>

#include <cmath>

#include "banditmt/error.hpp"
#include "banditmt/linucb.hpp"
#include "banditmt/mlp.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/rng.hpp"

using namespace banditmt;

namespace {

std::vector<double> gaussian_vector(RngStream &rng, std::size_t d, double scale = 1.0) {
    std::vector<double> x(d);
    for (auto &v : x) v = scale * rng.gaussian();
    return x;
}

struct Buffer {
    std::vector<std::vector<double>> inputs, heads;
    std::vector<double> targets;

    std::vector<FeatureSample> samples() const {
        std::vector<FeatureSample> out;
        for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back({inputs[i], heads[i], targets[i]});
        return out;
    }
};

Buffer random_buffer(RngStream &rng, std::size_t n, std::size_t d, std::size_t m) {
    Buffer b;
    for (std::size_t i = 0; i < n; ++i) {
        b.inputs.push_back(gaussian_vector(rng, d));
        b.heads.push_back(gaussian_vector(rng, m, 0.3));
        b.targets.push_back(rng.uniform());
    }
    return b;
}

} // namespace

TEST_CASE("network shapes and finiteness") {
    RngStream init(1);
    Mlp net(8, {50, 50}, 50, Activation::tanh, init);
    CHECK(net.input_dim() == 8);
    CHECK(net.output_dim() == 50);
    CHECK(net.layers().size() == 3);
    CHECK(net.parameter_count() == 8 * 50 + 50 + 50 * 50 + 50 + 50 * 50 + 50);
    RngStream rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto z = net.forward(gaussian_vector(rng, 8, 100.0));
        REQUIRE(z.size() == 50);
        for (double v : z) REQUIRE(std::isfinite(v));
    }
    CHECK_THROWS_AS(net.forward(std::vector<double>(7, 0.0)), DataError);
    for (const auto &layer : net.layers())
        for (double bias : layer.bias) CHECK(bias == 0.0);
}

TEST_CASE("identity network is the identity map") {
    const auto net = Mlp::identity(5);
    RngStream rng(3);
    const auto x = gaussian_vector(rng, 5);
    CHECK(net.forward(x) == x);
}

TEST_CASE("parameters round trip through the flat layout") {
    RngStream init(4);
    Mlp net(3, {4}, 2, Activation::tanh, init);
    auto p = net.parameters();
    CHECK(p.size() == net.parameter_count());
    // Layout: first layer weights (4 x 3) then its bias (4).
    CHECK(p[0] == net.layers()[0].weights[0]);
    CHECK(p[12] == net.layers()[0].bias[0]);
    for (auto &v : p) v += 0.5;
    net.set_parameters(p);
    CHECK(net.parameters() == p);
    CHECK_THROWS_AS(net.set_parameters(std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences") {
    for (auto act : {Activation::tanh, Activation::identity}) {
        CAPTURE(to_string(act));
        RngStream init(5), rng(6);
        Mlp net(6, {50, 50}, 50, act, init);
        const auto buffer = random_buffer(rng, 5, 6, 50);
        const auto samples = buffer.samples();
        const auto analytic = net.loss_gradient(samples);
        auto params = net.parameters();
        const double h = 1e-5;
        double worst = 0.0;
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double keep = params[i];
            params[i] = keep + h;
            net.set_parameters(params);
            const double up = net.loss(samples);
            params[i] = keep - h;
            net.set_parameters(params);
            const double down = net.loss(samples);
            params[i] = keep;
            const double numeric = (up - down) / (2 * h);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
        }
        net.set_parameters(params);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("full-batch descent never increases the loss at a small step") {
    RngStream init(7), rng(8);
    Mlp net(4, {50, 50}, 50, Activation::tanh, init);
    const auto buffer = random_buffer(rng, 32, 4, 50);
    const auto samples = buffer.samples();
    double prev = net.loss(samples);
    for (int step = 0; step < 50; ++step) {
        net.gradient_step(samples, 1e-3);
        const double now = net.loss(samples);
        REQUIRE(now <= prev);
        prev = now;
    }
}

TEST_CASE("network json round trip is exact") {
    RngStream init(9);
    Mlp net(3, {5, 4}, 2, Activation::tanh, init);
    const auto back = Mlp::from_json(nlohmann::json::parse(net.to_json().dump()));
    CHECK(back == net);
    CHECK_THROWS(Mlp::from_json(nlohmann::json{{"activation", "relu"}}));
}

TEST_CASE("fresh head ties at alpha times the feature norm") {
    NeuralLinUcbPolicy p(3, 6, {}, 11);
    RngStream rng(12);
    const auto x = gaussian_vector(rng, 6);
    const auto z = p.features(x);
    double norm = 0;
    for (double v : z) norm += v * v;
    for (std::size_t a = 0; a < 3; ++a) CHECK(p.head().score(ArmId(a), z) == doctest::Approx(1.5 * std::sqrt(norm)));
    RngStream r1(3), r2(3);
    CHECK(p.select(x, r1) == p.select(x, r2));
}

TEST_CASE("identity features without training reproduce LinUCB exactly") {
    const std::size_t d = 5, k = 3;
    NeuralLinUcbConfig cfg;
    cfg.train_every = 0;
    NeuralLinUcbPolicy nl(k, Mlp::identity(d), cfg, 1);
    LinUcbPolicy lin(k, d, {cfg.alpha, cfg.ridge});
    RngStream env(13), rng_nl(14), rng_lin(14);
    for (int t = 0; t < 400; ++t) {
        const auto x = gaussian_vector(env, d);
        const auto a = nl.select(x, rng_nl);
        REQUIRE(a == lin.select(x, rng_lin));
        const RewardSignal r(env.uniform());
        nl.update(a, x, r);
        lin.update(a, x, r);
    }
    CHECK(nl.head() == lin.model());
}

TEST_CASE("before the first training pass the policy is LinUCB over initial features") {
    NeuralLinUcbConfig cfg;
    NeuralLinUcbPolicy nl(2, 4, cfg, 21);
    const Mlp initial = nl.network();
    LinUcbModel head(2, cfg.latent_dim, {cfg.alpha, cfg.ridge});
    RngStream env(15), r1(16), r2(16);
    for (std::size_t t = 0; t + 1 < cfg.train_every; ++t) {
        const auto x = gaussian_vector(env, 4);
        const auto a = nl.select(x, r1);
        REQUIRE(a == head.select(initial.forward(x), r2));
        const double r = env.uniform();
        nl.update(a, x, RewardSignal(r));
        head.update(a, initial.forward(x), r);
    }
    CHECK(nl.head() == head);
    CHECK(nl.training_passes() == 0);
    CHECK(nl.network() == initial);
    nl.update(ArmId(0), gaussian_vector(env, 4), RewardSignal(0.5));
    CHECK(nl.training_passes() == 1);
    CHECK(!(nl.network() == initial));
}

TEST_CASE("training changes features and the head is rebuilt from the buffer") {
    NeuralLinUcbConfig cfg;
    cfg.train_every = 0;
    cfg.learning_rate = 0.01;
    NeuralLinUcbPolicy nl(2, 3, cfg, 33);
    RngStream env(17);
    for (int t = 0; t < 64; ++t) {
        const auto x = gaussian_vector(env, 3);
        const std::size_t a = t % 2;
        nl.update(ArmId(a), x, RewardSignal(a == 0 ? std::clamp(0.5 + 0.3 * x[0], 0.0, 1.0) : 0.2));
    }
    nl.train();
    LinUcbModel expect(2, cfg.latent_dim, {cfg.alpha, cfg.ridge});
    for (const auto &s : nl.buffer()) expect.update(s.arm, nl.network().forward(s.context), s.reward);
    CHECK(expect == nl.head());
}

TEST_CASE("buffer is FIFO with a cap") {
    NeuralLinUcbConfig cfg;
    cfg.train_every = 0;
    cfg.buffer_capacity = 10;
    NeuralLinUcbPolicy nl(2, 2, cfg, 1);
    for (int t = 0; t < 25; ++t) nl.update(ArmId(0), std::vector<double>{double(t), 1.0}, RewardSignal(0.5));
    REQUIRE(nl.buffer().size() == 10);
    CHECK(nl.buffer().front().context[0] == 15.0);
    CHECK(nl.buffer().back().context[0] == 24.0);
}

TEST_CASE("snapshot restores the whole learner, including the training stream") {
    NeuralLinUcbConfig cfg;
    cfg.train_every = 8;
    cfg.hidden = {12, 12};
    cfg.latent_dim = 6;
    NeuralLinUcbPolicy nl(3, 4, cfg, 5);
    RngStream env(18), rng(19);
    for (int t = 0; t < 20; ++t) {
        const auto x = gaussian_vector(env, 4);
        const auto a = nl.select(x, rng);
        nl.update(a, x, RewardSignal(env.uniform()));
    }
    const auto snap = nl.snapshot();
    auto restored = restore_policy(nlohmann::json::parse(snap.dump()));
    CHECK(restored->snapshot() == snap);
    RngStream r1(40), r2(40), e1(41), e2(41);
    for (int t = 0; t < 30; ++t) {
        const auto x1 = gaussian_vector(e1, 4);
        const auto x2 = gaussian_vector(e2, 4);
        const auto a = nl.select(x1, r1);
        REQUIRE(restored->select(x2, r2) == a);
        const double rv = e1.uniform();
        (void)e2.uniform();
        nl.update(a, x1, RewardSignal(rv));
        restored->update(a, x2, RewardSignal(rv));
    }
    CHECK(restored->snapshot() == nl.snapshot());
}

TEST_CASE("config validation") {
    NeuralLinUcbConfig cfg;
    cfg.learning_rate = 0;
    CHECK_THROWS_AS(NeuralLinUcbPolicy(2, 3, cfg, 1), ConfigError);
    cfg = {};
    cfg.hidden = {50, 0};
    CHECK_THROWS_AS(NeuralLinUcbPolicy(2, 3, cfg, 1), ConfigError);
    cfg = {};
    cfg.batch_size = 0;
    CHECK_THROWS_AS(NeuralLinUcbPolicy(2, 3, cfg, 1), ConfigError);
    CHECK_THROWS_AS(NeuralLinUcbPolicy(2, 0, NeuralLinUcbConfig{}, 1), ConfigError);
}
