// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "banditmt/analysis.hpp"
#include "banditmt/bleu.hpp"
#include "banditmt/cli/commands.hpp"
#include "banditmt/cli/run_config.hpp"
#include "banditmt/linalg.hpp"
#include "banditmt/linucb.hpp"
#include "banditmt/mlp.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/synthetic_env.hpp"
#include "banditmt/thompson.hpp"
#include "banditmt/ucb.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace banditmt;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(const std::string &name, bool ok, const std::string &detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

fs::path config_path(const char *name) { return fs::path(BANDITMT_CONFIG_DIR) / name; }

// Bernoulli suite shared by the regret and sublinearity checks.
struct SuiteRun {
    std::vector<double> regret_1000, regret_10000;
    std::vector<double> best_share_final;
};

SuiteRun bernoulli_suite(const char *kind, double &seconds) {
    const std::vector<double> p{0.5, 0.45, 0.4, 0.35, 0.3};
    SuiteRun out;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SyntheticSpec spec;
        spec.probabilities = p;
        spec.horizon = 10000;
        spec.seed = seed;
        std::vector<RoundRecord> records;
        if (std::string(kind) == "ucb") {
            UcbPolicy policy(5, UcbConfig{0.5});
            records = run_synthetic(policy, spec);
        } else {
            ThompsonPolicy policy(5);
            records = run_synthetic(policy, spec);
        }
        const auto curve = compute_regret(records);
        out.regret_1000.push_back(curve[999]);
        out.regret_10000.push_back(curve[9999]);
        std::size_t best = 0;
        for (std::size_t i = 9000; i < 10000; ++i) best += records[i].chosen == ArmId(0);
        out.best_share_final.push_back(static_cast<double>(best) / 1000.0);
    }
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

double mean(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void regret_and_sublinearity() {
    double seconds = 0.0;
    const auto ucb = bernoulli_suite("ucb", seconds);
    const auto ts = bernoulli_suite("ts", seconds);
    bool ok = seconds < 30.0;
    std::ostringstream detail;
    for (const auto &[name, run] : {std::pair<const char *, const SuiteRun &>{"ucb", ucb}, {"ts", ts}}) {
        const double r = mean(run.regret_10000);
        const double share = mean(run.best_share_final);
        const double worst_share = *std::min_element(run.best_share_final.begin(), run.best_share_final.end());
        ok = ok && r < 250.0 && share >= 0.8;
        detail << name << " mean regret " << fmt("%.1f", r) << ", best-arm share (final 1000) mean "
               << fmt("%.3f", share) << " min " << fmt("%.3f", worst_share) << "; ";
    }
    detail << "runtime " << fmt("%.2f", seconds) << " s";
    verdict("regret_sanity", ok, detail.str());

    bool sub = true;
    std::size_t held = 0;
    for (const auto *run : {&ucb, &ts}) {
        for (std::size_t s = 0; s < 20; ++s) {
            const bool h = run->regret_10000[s] / 10000.0 < run->regret_1000[s] / 1000.0;
            held += h;
            sub = sub && h;
        }
    }
    verdict("sublinearity", sub, std::to_string(held) + "/40 (policy, seed) pairs with regret(10000)/10000 < regret(1000)/1000");
}

void linucb_recovery() {
    const auto config = cli::load_run_config(config_path("linear_gaussian.json"));
    auto spec = std::get<SyntheticSpec>(config.environment);
    bool ok = true;
    double worst_err = 0.0, worst_oracle = 0.0, worst_ratio = 0.0;
    for (const std::uint64_t seed : config.seeds) {
        spec.seed = seed;
        LinUcbPolicy lin(spec.num_arms(), spec.dim());
        const auto lin_records = run_synthetic(lin, spec);
        UcbPolicy ucb(spec.num_arms());
        const auto ucb_records = run_synthetic(ucb, spec);
        const double ratio = compute_regret(lin_records).back() / compute_regret(ucb_records).back();
        worst_ratio = std::max(worst_ratio, ratio);
        for (std::size_t a = 0; a < spec.num_arms(); ++a) {
            std::vector<std::vector<double>> xs;
            std::vector<double> ys;
            for (const auto &r : lin_records) {
                if (r.chosen.value() != a) continue;
                xs.push_back(r.context->values());
                ys.push_back(r.reward.value());
            }
            const auto ls = oracle::least_squares(xs, ys, spec.dim(), 1.0);
            const auto &theta = lin.model().arm(ArmId(a)).theta;
            double oracle_diff = 0.0, err = 0.0;
            for (std::size_t i = 0; i < spec.dim(); ++i) {
                oracle_diff = std::max(oracle_diff, std::abs(theta[i] - ls[i]));
                err += (theta[i] - spec.thetas[a][i]) * (theta[i] - spec.thetas[a][i]);
            }
            err = std::sqrt(err);
            worst_err = std::max(worst_err, err);
            worst_oracle = std::max(worst_oracle, oracle_diff);
        }
    }
    ok = worst_err < 0.1 && worst_oracle < 1e-8 && worst_ratio < 0.5;
    verdict("linucb_recovery", ok,
            "max ||theta_hat - theta*|| " + fmt("%.4f", worst_err) + ", max |theta_hat - least squares| " +
                fmt("%.2e", worst_oracle) + ", max regret ratio LinUCB/UCB " + fmt("%.3f", worst_ratio) + " over " +
                std::to_string(config.seeds.size()) + " seeds");
}

void sherman_morrison() {
    double worst = 0.0;
    RngStream rng(2024);
    for (const std::size_t d : {2u, 8u, 16u}) {
        auto m = linalg::SymMatrix::identity(d);
        std::vector<std::vector<double>> xs;
        for (int i = 0; i < 1000; ++i) {
            std::vector<double> x(d);
            for (auto &v : x) v = rng.gaussian() / std::sqrt(static_cast<double>(d));
            linalg::rank1_inverse_update(m, x);
            xs.push_back(x);
        }
        const auto direct = oracle::invert(oracle::gram(xs, d, 1.0));
        oracle::Matrix rows(d, std::vector<double>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) rows[i][j] = m(i, j);
        worst = std::max(worst, oracle::max_abs_diff(rows, direct));
    }
    verdict("sherman_morrison_oracle", worst < 1e-8,
            "max |incremental - direct inverse| " + fmt("%.3e", worst) + " after 1000 updates at d = 2, 8, 16");
}

void neural_checks() {
    RngStream init(mix_seed(7, 1)), rng(99);
    const std::size_t d = 8;
    Mlp net(d, {50, 50}, 50, Activation::tanh, init);
    std::vector<std::vector<double>> inputs, heads;
    std::vector<double> targets;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> x(d), h(50);
        for (auto &v : x) v = rng.gaussian();
        for (auto &v : h) v = 0.3 * rng.gaussian();
        inputs.push_back(x);
        heads.push_back(h);
        targets.push_back(rng.uniform());
    }
    std::vector<FeatureSample> samples;
    for (int i = 0; i < 5; ++i) samples.push_back({inputs[i], heads[i], targets[i]});
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
    verdict("neural_gradient_check", worst < 1e-4,
            "max relative error " + fmt("%.3e", worst) + " over " + std::to_string(params.size()) + " parameters");

    // identity features, no training: must be LinUCB exactly
    SyntheticSpec spec;
    spec.kind = SyntheticKind::linear_gaussian;
    spec.thetas = {{0.5, 0.1, 0.2, 0.1, 0.0, 0.3, 0.1, 0.2}, {0.1, 0.4, 0.1, 0.3, 0.2, 0.0, 0.2, 0.1},
                   {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2}};
    spec.noise_sd = 0.1;
    spec.horizon = 2000;
    spec.seed = 31;
    NeuralLinUcbConfig cfg;
    cfg.train_every = 0;
    NeuralLinUcbPolicy nl(3, Mlp::identity(d), cfg, spec.seed);
    LinUcbPolicy lin(3, d, {cfg.alpha, cfg.ridge});
    const auto a = run_synthetic(nl, spec);
    const auto b = run_synthetic(lin, spec);
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a[i].chosen == b[i].chosen;
    const bool exact = same == a.size() && nl.head() == lin.model();
    verdict("neural_identity_reduction", exact,
            std::to_string(same) + "/" + std::to_string(a.size()) + " identical decisions, head state " +
                (nl.head() == lin.model() ? "bit-identical" : "differs"));
}

Tokens synth_sentence(RngStream &rng, std::size_t len, std::size_t vocab) {
    Tokens out;
    for (std::size_t i = 0; i < len; ++i) out.push_back("t" + std::to_string(rng.uniform_index(vocab)));
    return out;
}

void bleu_table() {
    std::vector<std::pair<Tokens, Tokens>> cases;
    const Tokens ref{"the", "quick", "brown", "fox", "jumps", "over", "the", "lazy", "dog"};
    cases.push_back({ref, ref});                                                           // perfect match
    cases.push_back({{"a", "b", "c", "d", "e"}, ref});                                    // zero overlap
    cases.push_back({{"the", "quick", "brown"}, ref});                                    // brevity penalty
    cases.push_back({{"the", "lazy", "fox", "jumps"}, ref});                              // smoothing: no 3/4-grams
    cases.push_back({{"quick", "the", "dog", "brown", "fox", "lazy", "over", "the", "jumps"}, ref});
    cases.push_back({{"the", "the", "the", "the", "the", "the", "the"}, ref});            // clipping
    cases.push_back({{"the", "quick", "brown", "fox", "jumps", "over", "the", "lazy", "dog", "today"}, ref});
    cases.push_back({{"fox"}, ref});
    cases.push_back({{"the", "quick"}, {"the", "quick"}});                                 // short perfect
    cases.push_back({{"jumps", "over"}, ref});
    RngStream rng(55);
    while (cases.size() < 50) {
        const auto r = synth_sentence(rng, 3 + rng.uniform_index(20), 8 + rng.uniform_index(20));
        auto hyp = synth_sentence(rng, 1 + rng.uniform_index(24), 8 + rng.uniform_index(20));
        if (rng.uniform() < 0.5) {
            hyp = r;
            for (auto &w : hyp)
                if (rng.uniform() < 0.3) w = "t" + std::to_string(rng.uniform_index(30));
            if (rng.uniform() < 0.5 && hyp.size() > 2) hyp.resize(hyp.size() - 1 - rng.uniform_index(hyp.size() / 2));
        }
        cases.push_back({hyp, r});
    }
    double worst = 0.0;
    std::size_t zero = 0, perfect = 0, partial = 0;
    std::vector<SegmentPair> pairs;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> oracle_pairs;
    for (const auto &[hyp, r] : cases) {
        const double ours = sentence_bleu(hyp, r);
        const double theirs = oracle::sentence_bleu(hyp, r);
        worst = std::max(worst, std::abs(ours - theirs));
        zero += ours == 0.0;
        perfect += ours == 100.0;
        partial += ours > 0.0 && ours < 100.0;
        pairs.push_back({hyp, r});
        oracle_pairs.push_back({hyp, r});
        const std::vector<SegmentPair> one{{hyp, r}};
        worst = std::max(worst, std::abs(corpus_bleu(one) - oracle::corpus_bleu({{hyp, r}})));
    }
    worst = std::max(worst, std::abs(corpus_bleu(pairs) - oracle::corpus_bleu(oracle_pairs)));
    verdict("bleu_oracle", worst < 1e-9,
            std::to_string(cases.size()) + " cases (" + std::to_string(perfect) + " perfect, " + std::to_string(zero) +
                " zero, " + std::to_string(partial) + " partial), max |native - oracle| " + fmt("%.2e", worst));
}

void parity(const char *name, const char *config_file) {
    const auto config = cli::load_run_config(config_path(config_file));
    const auto &src = std::get<cli::ReplaySource>(config.environment);
    const auto dataset = read_replay_log(src.log_path);
    bool ok = true;
    std::ostringstream detail;
    for (const auto &policy : config.policies) {
        const auto reports = cli::run_seeds(config, policy, &dataset);
        std::size_t held = 0;
        double deficit = 0.0;
        for (const auto &r : reports) {
            const double gap = r.replay->best_fixed_arm_average - r.replay->test_mean_reward;
            held += gap <= 0.02;
            deficit += gap;
        }
        ok = ok && held >= 18;
        detail << to_string(policy.kind) << " " << held << "/" << reports.size() << " (mean deficit "
               << fmt("%.4f", deficit / static_cast<double>(reports.size())) << "); ";
    }
    detail << "need >= 18/20 with test mean >= best fixed - 0.02";
    verdict(name, ok, detail.str());
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism() {
    const auto scratch = testing_support::scratch_dir("acceptance_determinism");
    std::size_t files = 0, differing = 0;
    bool ran = true;
    for (const auto &[cmd, cfg] : {std::pair<const char *, const char *>{"simulate", "linear_gaussian.json"},
                                   {"simulate", "bernoulli_5arm.json"},
                                   {"replay", "replay_fixture.json"},
                                   {"replay", "replay_target_free.json"}}) {
        std::vector<fs::path> outs;
        for (int rep = 0; rep < 2; ++rep) {
            const auto out = scratch / (std::string(cfg) + "." + std::to_string(rep));
            outs.push_back(out);
            const std::string c = config_path(cfg).string(), o = out.string();
            const char *argv[] = {"banditmt", cmd, "-c", c.c_str(), "--out", o.c_str(), "--workers", rep ? "1" : "2"};
            std::ostringstream sink, err;
            ran = ran && cli::run_cli(8, argv, sink, err) == 0;
        }
        for (const auto &e : fs::recursive_directory_iterator(outs[0])) {
            if (!e.is_regular_file()) continue;
            ++files;
            const auto other = outs[1] / fs::relative(e.path(), outs[0]);
            differing += !fs::exists(other) || slurp(e.path()) != slurp(other);
        }
    }
    verdict("determinism", ran && files > 0 && differing == 0,
            std::to_string(files) + " report files compared across reruns, " + std::to_string(differing) + " differ");
}

} // namespace

int main() {
    regret_and_sublinearity();
    linucb_recovery();
    sherman_morrison();
    neural_checks();
    bleu_table();
    parity("replay_parity", "replay_fixture.json");
    parity("target_free_parity", "replay_target_free.json");
    determinism();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
