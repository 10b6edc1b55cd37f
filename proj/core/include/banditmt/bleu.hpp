#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace banditmt {

using Tokens = std::vector<std::string>;

enum class TokenizerKind {
    whitespace,       ///< NFC, then split on unicode whitespace
    whitespace_punct, ///< as above, with punctuation split into its own tokens
};

std::string_view to_string(TokenizerKind kind) noexcept;
TokenizerKind parse_tokenizer(std::string_view name);

/// UTF-8 in, NFC-normalized tokens out. Throws DataError on invalid UTF-8.
Tokens tokenize(std::string_view text, TokenizerKind kind = TokenizerKind::whitespace_punct);

inline constexpr int kDefaultMaxOrder = 4;

/// Clipped n-gram match counts for orders 1..max_order plus lengths.
struct NgramStats {
    std::vector<std::size_t> matches; ///< matches[n-1] for order n
    std::vector<std::size_t> totals;  ///< hypothesis n-grams of order n
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;

    explicit NgramStats(int max_order = kDefaultMaxOrder)
        : matches(static_cast<std::size_t>(max_order), 0), totals(static_cast<std::size_t>(max_order), 0) {}

    NgramStats &operator+=(const NgramStats &other);
};

NgramStats ngram_stats(std::span<const std::string> hyp, std::span<const std::string> ref,
                       int max_order = kDefaultMaxOrder);

/// BLEU in [0, 100] from accumulated statistics.
///
/// Geometric mean with uniform weights over the orders that have at least
/// one hypothesis n-gram, times BP = min(1, exp(1 - ref/hyp)). A zero
/// unigram precision gives 0. When `smooth` is set, the k-th higher order
/// with zero matches uses precision 1 / (2^k * total); otherwise any zero
/// precision gives 0.
double bleu_from_stats(const NgramStats &stats, bool smooth);

/// Smoothed sentence-level BLEU. Empty hypothesis gives 0; empty reference
/// throws DataError.
double sentence_bleu(std::span<const std::string> hyp, std::span<const std::string> ref,
                     int max_order = kDefaultMaxOrder);

using SegmentPair = std::pair<Tokens, Tokens>; ///< (hypothesis, reference)

/// Corpus BLEU: statistics are pooled over segments first, no smoothing.
/// Throws DataError on an empty list or an empty reference.
double corpus_bleu(std::span<const SegmentPair> pairs, int max_order = kDefaultMaxOrder);

} // namespace banditmt
