// Writes the shipped replay fixtures: three synthetic systems over 200
// sentences with 8-dimensional contexts, reference/hypothesis texts and
// per-arm BLEU, COMET and CometKiwi scores. Contexts are unit-norm, as the
// ingestion pipeline writes them by default.
//
// Rewards are laid out first (system quality + shared sentence difficulty +
// small per-pair noise) and then shifted so each split hits the target arm
// means exactly. BLEU is measured on the generated hypotheses and COMET is
// solved from the reward, so reference-based rewards land where intended.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "banditmt/bleu.hpp"
#include "banditmt/replay_log.hpp"
#include "banditmt/reward.hpp"
#include "banditmt/rng.hpp"

namespace {

using namespace banditmt;

constexpr std::size_t kRows = 200;
constexpr std::size_t kSplit = 100;
constexpr std::size_t kDim = 8;
constexpr std::size_t kArms = 3;
constexpr std::array<double, kArms> kRewardMeans{0.70, 0.65, 0.40};
constexpr std::array<double, kArms> kKiwiMeans{0.70, 0.65, 0.42};
constexpr double kDifficultySd = 0.08;
constexpr double kPairNoiseSd = 0.04;

std::vector<std::string> make_vocabulary(RngStream &rng, std::size_t n) {
    static const char *onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ch", "sh"};
    static const char *vowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    std::vector<std::string> words;
    while (words.size() < n) {
        std::string w;
        const std::size_t syllables = 1 + rng.uniform_index(3);
        for (std::size_t s = 0; s < syllables; ++s) {
            w += onsets[rng.uniform_index(std::size(onsets))];
            w += vowels[rng.uniform_index(std::size(vowels))];
        }
        if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
    return words;
}

std::string join(const std::vector<std::string> &words, const std::string &end) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out + end;
}

// Replaces, drops or inserts words with total probability q per token.
std::vector<std::string> corrupt(const std::vector<std::string> &ref, double q, const std::vector<std::string> &vocab,
                                 RngStream &rng) {
    std::vector<std::string> out;
    for (const auto &w : ref) {
        if (rng.uniform() >= q) {
            out.push_back(w);
            continue;
        }
        const double kind = rng.uniform();
        if (kind < 0.6) {
            out.push_back(vocab[rng.uniform_index(vocab.size())]);
        } else if (kind < 0.85) {
            // dropped
        } else {
            out.push_back(w);
            out.push_back(vocab[rng.uniform_index(vocab.size())]);
        }
    }
    if (out.empty()) out.push_back(vocab[rng.uniform_index(vocab.size())]);
    return out;
}

// Shifts column `arm` of rows [first, last) to have exactly `mean`.
void pin_mean(std::vector<std::array<double, kArms>> &r, std::size_t arm, std::size_t first, std::size_t last,
              double mean) {
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += r[i][arm];
    const double shift = mean - sum / static_cast<double>(last - first);
    for (std::size_t i = first; i < last; ++i) r[i][arm] += shift;
}

} // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: banditmt_gen_fixture OUT_DIR\n";
        return 2;
    }
    const std::string out_dir = argv[1];
    RngStream rng(20240611);
    RngStream text_rng = rng.derive(1);
    const auto vocab = make_vocabulary(text_rng, 400);

    std::array<double, kDim> direction{};
    for (std::size_t j = 0; j < kDim; ++j) direction[j] = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(double(kDim));

    std::vector<std::vector<double>> contexts(kRows);
    std::vector<double> difficulty(kRows);
    std::vector<std::array<double, kArms>> reward(kRows), kiwi(kRows);
    for (std::size_t i = 0; i < kRows; ++i) {
        double proj = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) {
            const double z = rng.gaussian();
            contexts[i].push_back(0.35 + 0.1 * z);
            proj += direction[j] * z;
        }
        double norm = 0.0;
        for (const double v : contexts[i]) norm += v * v;
        for (double &v : contexts[i]) v /= std::sqrt(norm);
        difficulty[i] = kDifficultySd * proj;
        for (std::size_t a = 0; a < kArms; ++a) {
            reward[i][a] = kRewardMeans[a] + difficulty[i] + kPairNoiseSd * rng.gaussian();
            kiwi[i][a] = kKiwiMeans[a] + 0.8 * difficulty[i] + kPairNoiseSd * rng.gaussian();
        }
    }
    for (std::size_t a = 0; a < kArms; ++a) {
        pin_mean(reward, a, 0, kSplit, kRewardMeans[a]);
        pin_mean(reward, a, kSplit, kRows, kRewardMeans[a]);
        pin_mean(kiwi, a, 0, kSplit, kKiwiMeans[a]);
        pin_mean(kiwi, a, kSplit, kRows, kKiwiMeans[a]);
    }

    ReplayHeader header;
    header.arms = {"system_a", "system_b", "system_c"};
    header.dim = kDim;
    header.language_pair = "en-xx";
    header.domain = "synthetic";
    header.extra = {{"generator", "banditmt_gen_fixture"}, {"context_normalized", true}};

    const RewardConfig defaults;
    std::vector<ReplayRow> rows, kiwi_rows;
    for (std::size_t i = 0; i < kRows; ++i) {
        ReplayRow row;
        char id[16];
        std::snprintf(id, sizeof id, "s%04zu", i + 1);
        row.sentence_id = id;
        row.context = ContextVector(contexts[i]);
        std::vector<std::string> src_words, ref_words;
        const std::size_t len = 8 + text_rng.uniform_index(14);
        for (std::size_t w = 0; w < len; ++w) {
            src_words.push_back(vocab[text_rng.uniform_index(vocab.size())]);
            ref_words.push_back(vocab[text_rng.uniform_index(vocab.size())]);
        }
        const std::string end = text_rng.uniform() < 0.8 ? " ." : " ?";
        row.source = join(src_words, end);
        row.reference = join(ref_words, end);
        const auto ref_tokens = tokenize(*row.reference, defaults.tokenizer);
        for (std::size_t a = 0; a < kArms; ++a) {
            const double r = reward[i][a];
            const double q = std::clamp(0.95 - 1.1 * r, 0.0, 0.9);
            // Redraw until the solved COMET is a valid score.
            std::string hyp;
            double bleu = 0.0, comet = -1.0;
            for (int attempt = 0; attempt < 100 && !(comet >= 0.0 && comet <= 1.0); ++attempt) {
                hyp = join(corrupt(ref_words, q, vocab, text_rng), end);
                bleu = sentence_bleu(tokenize(hyp, defaults.tokenizer), ref_tokens);
                comet = (r - defaults.lambda * defaults.bleu.apply(bleu)) / (1.0 - defaults.lambda);
            }
            if (!(comet >= 0.0 && comet <= 1.0) || !(kiwi[i][a] >= 0.0 && kiwi[i][a] <= 1.0)) {
                std::cerr << "row " << i << " arm " << a << ": score out of range (comet " << comet << ", cometkiwi "
                          << kiwi[i][a] << ")\n";
                return 1;
            }
            row.hypotheses.push_back(hyp);
            row.scores.push_back(MetricScores{bleu, comet, kiwi[i][a]});
        }
        ReplayRow stripped = row;
        for (auto &s : stripped.scores) s = MetricScores{std::nullopt, std::nullopt, s.cometkiwi};
        rows.push_back(std::move(row));
        kiwi_rows.push_back(std::move(stripped));
    }

    ReplayHeader kiwi_header = header;
    kiwi_header.extra["metrics"] = {"cometkiwi"};
    const ReplayDataset full(header, std::move(rows));
    const ReplayDataset target_free(kiwi_header, std::move(kiwi_rows));
    for (const auto &[name, ds] : {std::pair{"replay_200.jsonl", &full}, std::pair{"replay_200_cometkiwi.jsonl", &target_free}}) {
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        write_replay_log(out, *ds);
        if (!out) {
            std::cerr << "cannot write " << out_dir << "/" << name << '\n';
            return 1;
        }
    }
    return 0;
}
