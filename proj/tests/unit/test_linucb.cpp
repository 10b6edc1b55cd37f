#include <doctest.h>

#include <cmath>

#include "banditmt/error.hpp"
#include "banditmt/linucb.hpp"
#include "banditmt/rng.hpp"
#include "oracles.hpp"

using namespace banditmt;

TEST_CASE("fresh model scores alpha times the norm for every arm") {
    LinUcbModel m(3, 4, {1.5, 1.0});
    RngStream rng(1);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x(4);
        double norm = 0;
        for (auto &v : x) {
            v = rng.gaussian();
            norm += v * v;
        }
        for (std::size_t a = 0; a < 3; ++a) CHECK(m.score(ArmId(a), x) == doctest::Approx(1.5 * std::sqrt(norm)));
    }
}

TEST_CASE("greedy linear scoring") {
    LinUcbModel m(2, 2, {0.0, 1.0});
    // theta_0 = (1, 0): one update with x = (1, 0), r = 1 under ridge 1 gives (0.5, 0);
    // theta_1 = (0, 0.5) similarly. Scores at (0.9, 0.1): 0.45 vs 0.05.
    m.update(ArmId(0), std::vector<double>{1.0, 0.0}, 1.0);
    m.update(ArmId(1), std::vector<double>{0.0, 1.0}, 1.0);
    RngStream rng(2);
    const std::vector<double> x{0.9, 0.1};
    CHECK(m.select(x, rng) == ArmId(0));
    CHECK(m.score(ArmId(0), x) == doctest::Approx(0.45));
    CHECK(m.score(ArmId(1), x) == doctest::Approx(0.05));
}

TEST_CASE("scalar update arithmetic") {
    LinUcbModel m(1, 1, {1.5, 1.0});
    m.update(ArmId(0), std::vector<double>{2.0}, 0.5);
    const auto &arm = m.arm(ArmId(0));
    CHECK(arm.a_inv(0, 0) == doctest::Approx(0.2));
    CHECK(arm.b[0] == doctest::Approx(1.0));
    CHECK(arm.theta[0] == doctest::Approx(0.2));
}

TEST_CASE("zero context is a no-op on the statistics") {
    LinUcbModel m(1, 3, {1.5, 1.0});
    m.update(ArmId(0), std::vector<double>{1.0, 2.0, 3.0}, 0.7);
    const auto before = m;
    m.update(ArmId(0), std::vector<double>{0.0, 0.0, 0.0}, 0.9);
    CHECK(m == before);
}

TEST_CASE("maintained inverse and theta agree with direct solves") {
    RngStream rng(10);
    for (std::size_t d : {2u, 5u, 8u}) {
        LinUcbModel m(1, d, {1.5, 1.0});
        std::vector<std::vector<double>> xs;
        std::vector<double> ys;
        for (int i = 0; i < 50; ++i) {
            std::vector<double> x(d);
            for (auto &v : x) v = rng.gaussian();
            const double r = rng.uniform();
            xs.push_back(x);
            ys.push_back(r);
            m.update(ArmId(0), x, r);
        }
        const auto &arm = m.arm(ArmId(0));
        const auto direct = oracle::invert(oracle::gram(xs, d, 1.0));
        double diff = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) diff = std::max(diff, std::abs(arm.a_inv(i, j) - direct[i][j]));
        CHECK(diff < 1e-8);
        CHECK(arm.a_inv.asymmetry() < 1e-9);
        const auto theta = oracle::least_squares(xs, ys, d, 1.0);
        for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(arm.theta[i] - theta[i]) < 1e-9);
        const auto again = arm.a_inv.multiply(arm.b);
        for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(arm.theta[i] - again[i]) < 1e-9);
    }
}

TEST_CASE("trained index at a probe point") {
    RngStream rng(11);
    LinUcbModel m(1, 2, {1.5, 1.0});
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> x{rng.gaussian(), rng.gaussian()};
        const double r = 0.8 * x[0] - 0.2 * x[1] + 0.01 * rng.gaussian();
        xs.push_back(x);
        m.update(ArmId(0), x, r); // the model itself takes any real target
    }
    const std::vector<double> probe{1.0, 1.0};
    const double width = std::sqrt(oracle::quad_form(oracle::invert(oracle::gram(xs, 2, 1.0)), probe));
    CHECK(std::abs(m.score(ArmId(0), probe) - (0.6 + 1.5 * width)) < 0.05);
    CHECK(m.width(ArmId(0), probe) == doctest::Approx(width).epsilon(1e-9));
}

TEST_CASE("policy wraps the model and rejects bad configs") {
    CHECK_THROWS_AS(LinUcbPolicy(2, 0), ConfigError);
    CHECK_THROWS_AS(LinUcbPolicy(2, 3, {-1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(LinUcbPolicy(2, 3, {1.0, 0.0}), ConfigError);
    LinUcbPolicy p(2, 3);
    CHECK(p.context_dim() == 3);
    CHECK(p.kind() == PolicyKind::linucb);
}

TEST_CASE("snapshot after 100 updates restores the inverse bit-exactly") {
    RngStream rng(12);
    LinUcbPolicy p(3, 4);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(4);
        for (auto &v : x) v = rng.gaussian();
        const auto a = p.select(x, rng);
        p.update(a, x, RewardSignal(rng.uniform()));
    }
    const auto json_text = p.snapshot().dump();
    const auto restored = restore_policy(nlohmann::json::parse(json_text));
    const auto &copy = dynamic_cast<const LinUcbPolicy &>(*restored);
    CHECK(copy.model() == p.model());
    for (std::size_t a = 0; a < 3; ++a) {
        const auto lhs = p.model().arm(ArmId(a)).a_inv.data();
        const auto rhs = copy.model().arm(ArmId(a)).a_inv.data();
        CHECK(std::equal(lhs.begin(), lhs.end(), rhs.begin()));
    }
    CHECK(copy.update_count() == 100);
}

TEST_CASE("opposite arms: the better arm follows the sign of the context") {
    // sigma = 0, theta_1 = -theta_0: after learning, LinUCB should pick by sign.
    RngStream rng(13);
    LinUcbPolicy p(2, 3, {0.5, 1.0});
    const std::vector<double> th{0.3, -0.2, 0.1};
    int correct = 0, total = 0;
    for (int t = 0; t < 3000; ++t) {
        std::vector<double> x(3);
        double norm = 0;
        for (auto &v : x) {
            v = rng.gaussian();
            norm += v * v;
        }
        for (auto &v : x) v /= std::sqrt(norm);
        double s = 0;
        for (int i = 0; i < 3; ++i) s += x[i] * th[i];
        const double r0 = 0.5 + s, r1 = 0.5 - s;
        const auto a = p.select(x, rng);
        p.update(a, x, RewardSignal(a == ArmId(0) ? r0 : r1));
        if (t >= 2000) {
            ++total;
            correct += (a == ArmId(0)) == (r0 >= r1);
        }
    }
    CHECK(correct >= 0.9 * total);
}
