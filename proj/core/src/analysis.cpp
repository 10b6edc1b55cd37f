#include "banditmt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "banditmt/bleu.hpp"
#include "banditmt/error.hpp"

namespace banditmt {

using nlohmann::json;

std::vector<double> compute_regret(std::span<const RoundRecord> records) {
    std::vector<double> curve;
    curve.reserve(records.size());
    double total = 0.0;
    for (const auto &r : records) {
        const auto &values = !r.expected_rewards.empty() ? r.expected_rewards : r.per_arm_rewards;
        if (values.empty()) {
            throw DataError("round " + std::to_string(r.t) + " has no per-arm rewards; regret is undefined");
        }
        if (r.chosen.value() >= values.size()) {
            throw DataError("round " + std::to_string(r.t) + ": chosen arm out of range");
        }
        const double best = *std::max_element(values.begin(), values.end());
        total += std::max(0.0, best - values[r.chosen.value()]);
        curve.push_back(total);
    }
    return curve;
}

std::vector<double> arm_averages(const ReplayDataset &dataset, const RewardConfig &config, std::size_t first,
                                 std::size_t last) {
    if (first >= last || last > dataset.size()) {
        throw DataError("best fixed arm needs a non-empty row range");
    }
    std::vector<double> sums(dataset.num_arms(), 0.0);
    for (std::size_t i = first; i < last; ++i) {
        for (std::size_t a = 0; a < sums.size(); ++a) {
            sums[a] += combine_reward(dataset.rows()[i].scores[a], config).value();
        }
    }
    for (auto &s : sums) {
        s /= static_cast<double>(last - first);
    }
    return sums;
}

FixedArm best_fixed_arm(const ReplayDataset &dataset, const RewardConfig &config, std::size_t first,
                        std::size_t last) {
    const auto averages = arm_averages(dataset, config, first, last);
    const auto it = std::max_element(averages.begin(), averages.end());
    return {ArmId(static_cast<std::size_t>(it - averages.begin())), *it};
}

FixedArm best_fixed_arm(const ReplayDataset &dataset, const RewardConfig &config) {
    if (dataset.size() == 0) {
        throw DataError("best fixed arm of an empty dataset");
    }
    return best_fixed_arm(dataset, config, 0, dataset.size());
}

namespace {

SegmentPair segment(const ReplayDataset &dataset, std::size_t row, ArmId arm, TokenizerKind tokenizer) {
    const auto &r = dataset.rows().at(row);
    if (!r.reference || r.hypotheses.size() <= arm.value() || !r.hypotheses[arm.value()]) {
        throw DataError("row " + std::to_string(row + 1) + " lacks the reference or hypothesis text for arm '" +
                        dataset.header().arms.at(arm.value()) + "'");
    }
    return {tokenize(*r.hypotheses[arm.value()], tokenizer), tokenize(*r.reference, tokenizer)};
}

} // namespace

double selected_corpus_bleu(std::span<const RoundRecord> records, const ReplayDataset &dataset,
                            TokenizerKind tokenizer) {
    std::vector<SegmentPair> pairs;
    for (const auto &r : records) {
        if (r.phase != Phase::test) {
            continue;
        }
        if (!r.row) {
            throw DataError("test record without a dataset row");
        }
        pairs.push_back(segment(dataset, *r.row, r.chosen, tokenizer));
    }
    if (pairs.empty()) {
        throw DataError("selected corpus BLEU needs at least one test record");
    }
    return corpus_bleu(pairs);
}

double fixed_arm_corpus_bleu(const ReplayDataset &dataset, ArmId arm, std::size_t first, std::size_t last,
                             TokenizerKind tokenizer) {
    std::vector<SegmentPair> pairs;
    for (std::size_t i = first; i < last; ++i) {
        pairs.push_back(segment(dataset, i, arm, tokenizer));
    }
    if (pairs.empty()) {
        throw DataError("fixed-arm corpus BLEU needs a non-empty row range");
    }
    return corpus_bleu(pairs);
}

RunReport summarize_run(std::span<const RoundRecord> records, std::size_t num_arms) {
    RunReport report;
    report.rounds = records.size();
    report.arm_histogram.assign(num_arms, 0);
    for (const auto &r : records) {
        validate_record(r, num_arms);
        report.cumulative_reward += r.reward.value();
        ++report.arm_histogram[r.chosen.value()];
    }
    report.regret_curve = compute_regret(records);
    report.cumulative_regret = report.regret_curve.empty() ? 0.0 : report.regret_curve.back();
    return report;
}

void add_replay_summary(RunReport &report, std::span<const RoundRecord> records, const ReplayDataset &dataset,
                        const RewardConfig &reward, const ReplayOptions &options) {
    const std::size_t first = options.explore_rows;
    const std::size_t last = options.explore_rows + options.test_rows;
    ReplaySummary s;
    const auto best = best_fixed_arm(dataset, reward, first, last);
    s.best_fixed_arm = best.arm.value();
    s.best_fixed_arm_name = dataset.header().arms.at(best.arm.value());
    s.best_fixed_arm_average = best.average;
    double reward_sum = 0.0;
    for (const auto &r : records) {
        if (r.phase != Phase::test) {
            continue;
        }
        ++s.test_rounds;
        reward_sum += r.reward.value();
        s.test_regret_vs_best_fixed += r.per_arm_rewards.at(best.arm.value()) - r.reward.value();
    }
    if (s.test_rounds == 0) {
        throw DataError("replay run produced no test rounds");
    }
    s.test_mean_reward = reward_sum / static_cast<double>(s.test_rounds);
    if (dataset.has_texts()) {
        s.selected_corpus_bleu = selected_corpus_bleu(records, dataset, reward.tokenizer);
        s.best_fixed_arm_corpus_bleu = fixed_arm_corpus_bleu(dataset, best.arm, first, last, reward.tokenizer);
        s.bleu_delta_absolute = *s.selected_corpus_bleu - *s.best_fixed_arm_corpus_bleu;
        if (*s.best_fixed_arm_corpus_bleu > 0.0) {
            s.bleu_delta_relative = 100.0 * *s.bleu_delta_absolute / *s.best_fixed_arm_corpus_bleu;
        }
    }
    report.replay = s;
}

namespace {

json optional_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

} // namespace

json to_json(const RunReport &r) {
    json j = {{"version", kReportVersion},
              {"policy", r.policy},
              {"environment", r.environment},
              {"seeds", r.seeds},
              {"seeds_aggregated", r.seeds_aggregated},
              {"config_digest", r.config_digest},
              {"config", r.config},
              {"arm_names", r.arm_names},
              {"rounds", r.rounds},
              {"cumulative_reward", r.cumulative_reward},
              {"cumulative_regret", r.cumulative_regret},
              {"regret_curve", r.regret_curve},
              {"arm_histogram", r.arm_histogram}};
    if (r.replay) {
        const auto &s = *r.replay;
        j["replay"] = {{"test_rounds", s.test_rounds},
                       {"test_mean_reward", s.test_mean_reward},
                       {"best_fixed_arm", s.best_fixed_arm},
                       {"best_fixed_arm_name", s.best_fixed_arm_name},
                       {"best_fixed_arm_average", s.best_fixed_arm_average},
                       {"test_regret_vs_best_fixed", s.test_regret_vs_best_fixed},
                       {"selected_corpus_bleu", optional_json(s.selected_corpus_bleu)},
                       {"best_fixed_arm_corpus_bleu", optional_json(s.best_fixed_arm_corpus_bleu)},
                       {"bleu_delta_absolute", optional_json(s.bleu_delta_absolute)},
                       {"bleu_delta_relative", optional_json(s.bleu_delta_relative)}};
    } else {
        j["replay"] = nullptr;
    }
    return j;
}

RunReport run_report_from_json(const json &j) {
    try {
        if (j.at("version").get<int>() != kReportVersion) {
            throw DataError("unsupported report version " + j.at("version").dump());
        }
        RunReport r;
        r.policy = j.at("policy").get<std::string>();
        r.environment = j.at("environment").get<std::string>();
        r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        r.seeds_aggregated = j.at("seeds_aggregated").get<std::size_t>();
        r.config_digest = j.at("config_digest").get<std::string>();
        r.config = j.at("config");
        r.arm_names = j.at("arm_names").get<std::vector<std::string>>();
        r.rounds = j.at("rounds").get<std::uint64_t>();
        r.cumulative_reward = j.at("cumulative_reward").get<double>();
        r.cumulative_regret = j.at("cumulative_regret").get<double>();
        r.regret_curve = j.at("regret_curve").get<std::vector<double>>();
        r.arm_histogram = j.at("arm_histogram").get<std::vector<std::uint64_t>>();
        if (j.contains("replay") && !j.at("replay").is_null()) {
            const auto &jr = j.at("replay");
            ReplaySummary s;
            s.test_rounds = jr.at("test_rounds").get<std::size_t>();
            s.test_mean_reward = jr.at("test_mean_reward").get<double>();
            s.best_fixed_arm = jr.at("best_fixed_arm").get<std::size_t>();
            s.best_fixed_arm_name = jr.at("best_fixed_arm_name").get<std::string>();
            s.best_fixed_arm_average = jr.at("best_fixed_arm_average").get<double>();
            s.test_regret_vs_best_fixed = jr.at("test_regret_vs_best_fixed").get<double>();
            s.selected_corpus_bleu = optional_from(jr, "selected_corpus_bleu");
            s.best_fixed_arm_corpus_bleu = optional_from(jr, "best_fixed_arm_corpus_bleu");
            s.bleu_delta_absolute = optional_from(jr, "bleu_delta_absolute");
            s.bleu_delta_relative = optional_from(jr, "bleu_delta_relative");
            r.replay = s;
        }
        return r;
    } catch (const json::exception &e) {
        throw DataError(std::string("malformed run report: ") + e.what());
    }
}

Dispersion dispersion_of(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("dispersion of an empty list");
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd, values.front(), values.back()};
}

AggregateReport aggregate_seeds(std::span<const RunReport> reports) {
    if (reports.empty()) {
        throw DataError("no reports to aggregate");
    }
    const auto &first = reports.front();
    for (const auto &r : reports) {
        if (r.config_digest != first.config_digest) {
            throw DataError("cannot aggregate reports with different config digests (" + first.config_digest +
                            " vs " + r.config_digest + ")");
        }
        if (r.arm_histogram.size() != first.arm_histogram.size()) {
            throw DataError("cannot aggregate reports with different arm counts");
        }
        if (r.replay.has_value() != first.replay.has_value()) {
            throw DataError("cannot aggregate replay and synthetic reports together");
        }
    }

    AggregateReport out;
    RunReport &s = out.summary;
    s.policy = first.policy;
    s.environment = first.environment;
    s.config_digest = first.config_digest;
    s.config = first.config;
    s.arm_names = first.arm_names;
    s.arm_histogram.assign(first.arm_histogram.size(), 0);
    s.seeds_aggregated = 0;
    for (const auto &r : reports) {
        s.seeds.insert(s.seeds.end(), r.seeds.begin(), r.seeds.end());
        s.seeds_aggregated += r.seeds_aggregated;
        for (std::size_t a = 0; a < r.arm_histogram.size(); ++a) {
            s.arm_histogram[a] += r.arm_histogram[a];
        }
    }
    std::sort(s.seeds.begin(), s.seeds.end());

    auto collect = [&](auto getter) {
        std::vector<double> v;
        v.reserve(reports.size());
        for (const auto &r : reports) {
            v.push_back(getter(r));
        }
        return dispersion_of(std::move(v));
    };
    auto record = [&](const std::string &name, auto getter) {
        const auto d = collect(getter);
        out.dispersion[name] = d;
        return d.mean;
    };

    s.rounds = static_cast<std::uint64_t>(
        std::llround(record("rounds", [](const RunReport &r) { return static_cast<double>(r.rounds); })));
    s.cumulative_reward = record("cumulative_reward", [](const RunReport &r) { return r.cumulative_reward; });
    s.cumulative_regret = record("cumulative_regret", [](const RunReport &r) { return r.cumulative_regret; });

    std::size_t curve_len = first.regret_curve.size();
    for (const auto &r : reports) {
        curve_len = std::min(curve_len, r.regret_curve.size());
    }
    s.regret_curve.resize(curve_len);
    std::vector<double> column(reports.size());
    for (std::size_t t = 0; t < curve_len; ++t) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            column[i] = reports[i].regret_curve[t];
        }
        std::sort(column.begin(), column.end());
        s.regret_curve[t] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
    }

    if (first.replay) {
        ReplaySummary m = *first.replay;
        auto rep = [](const RunReport &r) -> const ReplaySummary & { return *r.replay; };
        m.test_mean_reward = record("test_mean_reward", [&](const RunReport &r) { return rep(r).test_mean_reward; });
        m.best_fixed_arm_average =
            record("best_fixed_arm_average", [&](const RunReport &r) { return rep(r).best_fixed_arm_average; });
        m.test_regret_vs_best_fixed =
            record("test_regret_vs_best_fixed", [&](const RunReport &r) { return rep(r).test_regret_vs_best_fixed; });
        auto all_have = [&](auto member) {
            return std::all_of(reports.begin(), reports.end(),
                               [&](const RunReport &r) { return (rep(r).*member).has_value(); });
        };
        auto optional_mean = [&](const std::string &name, std::optional<double> ReplaySummary::*member) {
            if (!all_have(member)) {
                m.*member = std::nullopt;
                return;
            }
            m.*member = record(name, [&](const RunReport &r) { return *(rep(r).*member); });
        };
        optional_mean("selected_corpus_bleu", &ReplaySummary::selected_corpus_bleu);
        optional_mean("best_fixed_arm_corpus_bleu", &ReplaySummary::best_fixed_arm_corpus_bleu);
        optional_mean("bleu_delta_absolute", &ReplaySummary::bleu_delta_absolute);
        optional_mean("bleu_delta_relative", &ReplaySummary::bleu_delta_relative);
        s.replay = m;
    }
    return out;
}

json to_json(const AggregateReport &report) {
    json j = to_json(report.summary);
    json d = json::object();
    for (const auto &[name, v] : report.dispersion) {
        d[name] = {{"mean", v.mean}, {"sd", v.sd}, {"min", v.min}, {"max", v.max}};
    }
    j["dispersion"] = d;
    return j;
}

void write_regret_csv(std::ostream &out, const RunReport &report) {
    out << "round,cumulative_regret\n";
    const auto old = out.precision(17);
    for (std::size_t t = 0; t < report.regret_curve.size(); ++t) {
        out << (t + 1) << ',' << report.regret_curve[t] << '\n';
    }
    out.precision(old);
}

void write_histogram_csv(std::ostream &out, const RunReport &report) {
    out << "arm,name,count\n";
    for (std::size_t a = 0; a < report.arm_histogram.size(); ++a) {
        const std::string name = a < report.arm_names.size() ? report.arm_names[a] : std::to_string(a);
        out << a << ',' << name << ',' << report.arm_histogram[a] << '\n';
    }
}

} // namespace banditmt
