#include "fixtures.hpp"

#include <cmath>

namespace testing_support {

using namespace banditmt;

std::filesystem::path fixture_dir() { return BANDITMT_FIXTURE_DIR; }

namespace {

ReplayDataset make(const std::vector<std::vector<double>> &values, std::size_t dim, std::uint64_t seed, bool kiwi) {
    ReplayHeader header;
    for (std::size_t a = 0; a < values.at(0).size(); ++a) header.arms.push_back("arm" + std::to_string(a));
    header.dim = dim;
    header.language_pair = "xx-yy";
    header.domain = "test";
    RngStream rng(seed);
    std::vector<ReplayRow> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ReplayRow row;
        row.sentence_id = "r" + std::to_string(i);
        if (dim > 0) {
            std::vector<double> x(dim);
            double norm = 0.0;
            for (auto &v : x) {
                v = std::abs(rng.gaussian()) + 0.1;
                norm += v * v;
            }
            for (auto &v : x) v /= std::sqrt(norm);
            row.context = ContextVector(x);
        }
        for (const double v : values[i]) {
            MetricScores s;
            if (kiwi) {
                s.cometkiwi = v;
            } else {
                s.bleu = 0.0;
                s.comet = v;
            }
            row.scores.push_back(s);
        }
        rows.push_back(std::move(row));
    }
    return ReplayDataset(header, std::move(rows));
}

} // namespace

ReplayDataset comet_dataset(const std::vector<std::vector<double>> &comet, std::size_t dim, std::uint64_t seed) {
    return make(comet, dim, seed, false);
}

ReplayDataset kiwi_dataset(const std::vector<std::vector<double>> &kiwi, std::size_t dim, std::uint64_t seed) {
    return make(kiwi, dim, seed, true);
}

std::filesystem::path scratch_dir(const std::string &name) {
    const auto dir = std::filesystem::path(BANDITMT_SCRATCH_DIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing_support
