#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace banditmt {

/// SplitMix64 finalizer; used to derive independent sub-seeds from a run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded pseudorandom stream with portable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. All distributions are implemented here rather than taken from
/// <random>, because library distributions differ between implementations.
/// Identical seed plus identical call sequence gives identical draws.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n); n must be positive. Unbiased (rejection).
    std::size_t uniform_index(std::size_t n);

    /// Standard normal via the Box-Muller transform (no cached spare).
    double gaussian();

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
    double gamma(double shape);

    /// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
    double beta(double a, double b);

    /// Independent stream derived from this stream's seed.
    RngStream derive(std::uint64_t stream) const;

    /// Full engine state as text, restorable with restore_state().
    std::string state() const;
    void restore_state(std::string_view text);

    friend bool operator==(const RngStream &a, const RngStream &b) {
        return a.seed_ == b.seed_ && a.engine_ == b.engine_;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

template <class RandomIt> void shuffle(RandomIt first, RandomIt last, RngStream &rng) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

} // namespace banditmt
