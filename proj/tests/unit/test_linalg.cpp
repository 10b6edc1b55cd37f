#include <doctest.h>

#include "banditmt/error.hpp"
#include "banditmt/linalg.hpp"
#include "banditmt/rng.hpp"
#include "oracles.hpp"

using namespace banditmt;
using namespace banditmt::linalg;

namespace {

oracle::Matrix to_rows(const SymMatrix &m) {
    oracle::Matrix out(m.dim(), std::vector<double>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out[i][j] = m(i, j);
    return out;
}

std::vector<double> random_vector(RngStream &rng, std::size_t d) {
    std::vector<double> x(d);
    for (auto &v : x) v = rng.gaussian();
    return x;
}

} // namespace

TEST_CASE("sherman-morrison hand example") {
    const std::vector<double> x{1.0, 0.0};
    const auto m = sm_rank1_update(SymMatrix::identity(2), x);
    CHECK(m(0, 0) == doctest::Approx(0.5));
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 0) == 0.0);
    CHECK(m(1, 1) == 1.0);
}

TEST_CASE("zero vector leaves the inverse unchanged") {
    RngStream rng(2);
    auto m = SymMatrix::identity(4, 0.5);
    for (int i = 0; i < 5; ++i) rank1_inverse_update(m, random_vector(rng, 4));
    const auto before = m;
    rank1_inverse_update(m, std::vector<double>(4, 0.0));
    CHECK(m == before);
}

TEST_CASE("incremental inverse agrees with direct inversion") {
    for (std::size_t d : {1u, 2u, 8u, 16u}) {
        CAPTURE(d);
        for (std::uint64_t seq = 0; seq < 100; ++seq) {
            RngStream rng(mix_seed(d, seq));
            auto m = SymMatrix::identity(d);
            std::vector<std::vector<double>> xs;
            for (int i = 0; i < 30; ++i) {
                xs.push_back(random_vector(rng, d));
                rank1_inverse_update(m, xs.back());
            }
            const auto direct = oracle::invert(oracle::gram(xs, d, 1.0));
            REQUIRE(oracle::max_abs_diff(to_rows(m), direct) < 1e-8);
            REQUIRE(m.asymmetry() == 0.0);
        }
    }
}

TEST_CASE("PD preservation under long update sequences") {
    RngStream rng(5);
    auto m = SymMatrix::identity(8);
    for (int i = 0; i < 1000; ++i) {
        rank1_inverse_update(m, random_vector(rng, 8));
        if (i % 100 == 0) {
            for (int p = 0; p < 10; ++p) CHECK(quad_form(m, random_vector(rng, 8)) > 0.0);
        }
    }
    CHECK(m.asymmetry() < 1e-9);
}

TEST_CASE("quad form") {
    const std::vector<double> x{3.0, 4.0};
    CHECK(quad_form(SymMatrix::identity(2), x) == 25.0);
    CHECK(quad_form(SymMatrix::identity(2), std::vector<double>{0.0, 0.0}) == 0.0);
    RngStream rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = SymMatrix::identity(6, 2.0);
        for (int i = 0; i < 10; ++i) rank1_inverse_update(m, random_vector(rng, 6));
        const auto probe = random_vector(rng, 6);
        CHECK(std::abs(quad_form(m, probe) - oracle::quad_form(to_rows(m), probe)) < 1e-10);
    }
}

TEST_CASE("corruption is reported") {
    // Negative definite input: the quadratic form cannot be a valid width.
    const auto neg = SymMatrix::from_rows(2, {-1.0, 0.0, 0.0, -1.0});
    CHECK_THROWS_AS(quad_form(neg, std::vector<double>{1.0, 1.0}), StateError);
    // 1 + x^T A^{-1} x = 0 for A^{-1} = -I, x = (1, 0).
    auto m = neg;
    CHECK_THROWS_AS(rank1_inverse_update(m, std::vector<double>{1.0, 0.0}), StateError);
}

TEST_CASE("matrix construction and products") {
    CHECK_THROWS_AS(SymMatrix::from_rows(2, {1.0, 2.0, 3.0, 4.0}), std::invalid_argument);
    CHECK_THROWS_AS(SymMatrix::from_rows(2, {1.0, 2.0, 2.0}), std::invalid_argument);
    const auto m = SymMatrix::from_rows(2, {2.0, 1.0, 1.0, 3.0});
    CHECK(m.multiply(std::vector<double>{1.0, 1.0}) == Vector{3.0, 4.0});
    CHECK(dot(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) == 32.0);
    CHECK_THROWS_AS(dot(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(m.multiply(std::vector<double>{1.0}), std::invalid_argument);
}
