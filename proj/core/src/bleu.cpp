#include "banditmt/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "banditmt/error.hpp"

namespace banditmt {

std::string_view to_string(TokenizerKind kind) noexcept {
    return kind == TokenizerKind::whitespace ? "whitespace" : "whitespace+punct";
}

TokenizerKind parse_tokenizer(std::string_view name) {
    if (name == "whitespace") return TokenizerKind::whitespace;
    if (name == "whitespace+punct") return TokenizerKind::whitespace_punct;
    throw ConfigError("unknown tokenizer '" + std::string(name) + "' (expected whitespace or whitespace+punct)");
}

namespace {

std::string nfc(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2 *norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw StateError("ICU NFC normalizer unavailable");
    }
    const auto in = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    const icu::UnicodeString out = norm->normalize(in, status);
    if (U_FAILURE(status)) {
        throw DataError("NFC normalization failed");
    }
    std::string result;
    out.toUTF8String(result);
    return result;
}

void validate_utf8(std::string_view text) {
    int32_t i = 0;
    const auto len = static_cast<int32_t>(text.size());
    const auto *s = reinterpret_cast<const uint8_t *>(text.data());
    while (i < len) {
        UChar32 c = 0;
        U8_NEXT(s, i, len, c);
        if (c < 0) {
            throw DataError("invalid UTF-8 in text");
        }
    }
}

} // namespace

Tokens tokenize(std::string_view text, TokenizerKind kind) {
    validate_utf8(text);
    const std::string normalized = nfc(text);
    const auto *s = reinterpret_cast<const uint8_t *>(normalized.data());
    const auto len = static_cast<int32_t>(normalized.size());

    Tokens tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    int32_t i = 0;
    while (i < len) {
        const int32_t start = i;
        UChar32 c = 0;
        U8_NEXT(s, i, len, c);
        const std::string_view piece(normalized.data() + start, static_cast<std::size_t>(i - start));
        if (u_isUWhiteSpace(c)) {
            flush();
        } else if (kind == TokenizerKind::whitespace_punct && u_ispunct(c)) {
            flush();
            tokens.emplace_back(piece);
        } else {
            current.append(piece);
        }
    }
    flush();
    return tokens;
}

NgramStats &NgramStats::operator+=(const NgramStats &other) {
    if (other.matches.size() != matches.size()) {
        throw std::invalid_argument("NgramStats: max order mismatch");
    }
    for (std::size_t n = 0; n < matches.size(); ++n) {
        matches[n] += other.matches[n];
        totals[n] += other.totals[n];
    }
    hyp_len += other.hyp_len;
    ref_len += other.ref_len;
    return *this;
}

namespace {

using Ngram = std::vector<std::string_view>;

std::map<Ngram, std::size_t> count_ngrams(std::span<const std::string> tokens, std::size_t n) {
    std::map<Ngram, std::size_t> counts;
    if (tokens.size() < n) {
        return counts;
    }
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        Ngram g(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        ++counts[g];
    }
    return counts;
}

} // namespace

NgramStats ngram_stats(std::span<const std::string> hyp, std::span<const std::string> ref, int max_order) {
    if (max_order < 1) {
        throw std::invalid_argument("BLEU max order must be >= 1");
    }
    NgramStats stats(max_order);
    stats.hyp_len = hyp.size();
    stats.ref_len = ref.size();
    for (std::size_t n = 1; n <= static_cast<std::size_t>(max_order); ++n) {
        const auto hyp_counts = count_ngrams(hyp, n);
        const auto ref_counts = count_ngrams(ref, n);
        std::size_t matched = 0;
        std::size_t total = 0;
        for (const auto &[gram, count] : hyp_counts) {
            total += count;
            const auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) {
                matched += std::min(count, it->second);
            }
        }
        stats.matches[n - 1] = matched;
        stats.totals[n - 1] = total;
    }
    return stats;
}

double bleu_from_stats(const NgramStats &stats, bool smooth) {
    if (stats.hyp_len == 0 || stats.totals.empty() || stats.matches[0] == 0) {
        return 0.0;
    }
    double log_sum = 0.0;
    std::size_t orders = 0;
    double smooth_denominator = 1.0;
    for (std::size_t n = 0; n < stats.totals.size(); ++n) {
        if (stats.totals[n] == 0) {
            break; // hypothesis shorter than this order: drop it from the mean
        }
        double precision = 0.0;
        if (stats.matches[n] > 0) {
            precision = static_cast<double>(stats.matches[n]) / static_cast<double>(stats.totals[n]);
        } else if (smooth) {
            smooth_denominator *= 2.0;
            precision = 1.0 / (smooth_denominator * static_cast<double>(stats.totals[n]));
        } else {
            return 0.0;
        }
        log_sum += std::log(precision);
        ++orders;
    }
    const double hyp = static_cast<double>(stats.hyp_len);
    const double ref = static_cast<double>(stats.ref_len);
    const double bp = hyp < ref ? std::exp(1.0 - ref / hyp) : 1.0;
    return 100.0 * bp * std::exp(log_sum / static_cast<double>(orders));
}

double sentence_bleu(std::span<const std::string> hyp, std::span<const std::string> ref, int max_order) {
    if (ref.empty()) {
        throw DataError("sentence_bleu: empty reference");
    }
    return bleu_from_stats(ngram_stats(hyp, ref, max_order), true);
}

double corpus_bleu(std::span<const SegmentPair> pairs, int max_order) {
    if (pairs.empty()) {
        throw DataError("corpus_bleu: empty corpus");
    }
    NgramStats total(max_order);
    for (const auto &[hyp, ref] : pairs) {
        if (ref.empty()) {
            throw DataError("corpus_bleu: empty reference");
        }
        total += ngram_stats(hyp, ref, max_order);
    }
    return bleu_from_stats(total, false);
}

} // namespace banditmt
