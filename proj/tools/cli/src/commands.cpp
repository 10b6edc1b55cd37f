#include "banditmt/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "banditmt/error.hpp"
#include "banditmt/policy_factory.hpp"
#include "banditmt/replay_env.hpp"
#include "banditmt/synthetic_env.hpp"

namespace banditmt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> synthetic_arm_names(std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < k; ++a) names.push_back("arm" + std::to_string(a));
    return names;
}

void write_json(const fs::path &path, const json &doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

template <class Fn> void write_text(const fs::path &path, Fn &&fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void run_all(const RunConfig &config, const ReplayDataset *dataset, std::ostream &log) {
    for (const auto &policy : config.policies) {
        const std::string name(to_string(policy.kind));
        log << name << ": " << config.seeds.size() << " seed(s)\n";
        auto reports = run_seeds(config, policy, dataset);
        const auto aggregate = aggregate_seeds(reports);
        write_outputs(config, reports, aggregate);
        log << name << ": mean cumulative regret " << aggregate.summary.cumulative_regret << " over "
            << aggregate.summary.rounds << " rounds -> " << (config.output / name).string() << '\n';
    }
}

} // namespace

RunReport run_seed(const RunConfig &config, const PolicySpec &spec, const ReplayDataset *dataset,
                   std::uint64_t seed) {
    const json resolved = resolved_config(config, spec);
    RunReport report;
    if (const auto *synthetic = std::get_if<SyntheticSpec>(&config.environment)) {
        SyntheticSpec s = *synthetic;
        s.seed = seed;
        auto policy = make_policy(spec, s.num_arms(), s.dim(), seed);
        const auto records = run_synthetic(*policy, s);
        report = summarize_run(records, s.num_arms());
        report.environment = "synthetic";
        report.arm_names = synthetic_arm_names(s.num_arms());
    } else {
        if (dataset == nullptr) throw std::invalid_argument("run_seed: replay environment without a dataset");
        const auto &options = std::get<ReplaySource>(config.environment).options;
        auto policy = make_policy(spec, dataset->num_arms(), dataset->dim(), seed);
        const auto records = run_replay(*policy, *dataset, config.reward, options, seed);
        report = summarize_run(records, dataset->num_arms());
        report.environment = "replay";
        report.arm_names = dataset->header().arms;
        add_replay_summary(report, records, *dataset, config.reward, options);
    }
    report.policy = std::string(to_string(spec.kind));
    report.seeds = {seed};
    report.seeds_aggregated = 1;
    report.config = resolved;
    report.config_digest = config_digest(resolved);
    return report;
}

std::vector<RunReport> run_seeds(const RunConfig &config, const PolicySpec &policy, const ReplayDataset *dataset) {
    const std::size_t n = config.seeds.size();
    std::vector<RunReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                reports[i] = run_seed(config, policy, dataset, config.seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(config.workers, n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return reports;
}

void write_outputs(const RunConfig &config, const std::vector<RunReport> &reports, const AggregateReport &aggregate) {
    const fs::path dir = config.output / aggregate.summary.policy;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto &r : reports) {
        const std::string stem = "seed_" + std::to_string(r.seeds.at(0));
        write_json(dir / (stem + ".json"), to_json(r));
        if (config.csv) {
            write_text(dir / (stem + "_regret.csv"), [&](std::ostream &o) { write_regret_csv(o, r); });
            write_text(dir / (stem + "_arms.csv"), [&](std::ostream &o) { write_histogram_csv(o, r); });
        }
    }
    write_json(dir / "aggregate.json", to_json(aggregate));
    if (config.csv) {
        write_text(dir / "aggregate_regret.csv", [&](std::ostream &o) { write_regret_csv(o, aggregate.summary); });
    }
}

void simulate(const RunConfig &config, std::ostream &log) {
    if (config.is_replay()) throw ConfigError("environment.kind: simulate needs a synthetic environment");
    run_all(config, nullptr, log);
}

void replay(const RunConfig &config, std::ostream &log) {
    const auto *source = std::get_if<ReplaySource>(&config.environment);
    if (source == nullptr) throw ConfigError("environment.kind: replay needs a replay environment");
    const ReplayDataset dataset = read_replay_log(source->log_path);
    // Surface data/policy mismatches before any seed starts.
    const ReplayEnvironment probe(dataset, config.reward, source->options, 0);
    for (const auto &spec : config.policies) {
        const auto policy = make_policy(spec, dataset.num_arms(), dataset.dim(), 0);
        probe.check_policy(*policy);
    }
    log << "replay: " << dataset.size() << " rows, " << dataset.num_arms() << " systems, dim " << dataset.dim()
        << '\n';
    run_all(config, &dataset, log);
}

bool validate_log(const fs::path &path, std::ostream &out) {
    const auto check = check_replay_log_file(path);
    for (const auto &v : check.violations) out << path.string() << ": " << v.describe() << '\n';
    if (check.ok()) {
        const auto &ds = *check.dataset;
        out << path.string() << ": ok (" << ds.size() << " rows, " << ds.num_arms() << " systems, dim " << ds.dim()
            << ")\n";
        return true;
    }
    out << path.string() << ": " << check.violations.size() << " violation(s)\n";
    return false;
}

void report(const std::vector<fs::path> &inputs, const std::optional<fs::path> &output, std::ostream &out) {
    std::vector<fs::path> files;
    for (const auto &in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto &entry : fs::directory_iterator(in)) {
                const std::string name = entry.path().filename().string();
                if (entry.is_regular_file() && name.rfind("seed_", 0) == 0 && entry.path().extension() == ".json") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(in);
        }
    }
    if (files.empty()) throw DataError("report: no per-seed reports found");
    std::vector<RunReport> reports;
    for (const auto &f : files) {
        std::ifstream in(f);
        if (!in) throw DataError("cannot open report '" + f.string() + "'");
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error &e) {
            throw DataError(f.string() + ": not valid JSON: " + e.what());
        }
        try {
            reports.push_back(run_report_from_json(doc));
        } catch (const DataError &e) {
            throw DataError(f.string() + ": " + e.what());
        }
    }
    const json doc = to_json(aggregate_seeds(reports));
    if (output) {
        write_json(*output, doc);
    } else {
        out << doc.dump(2) << '\n';
    }
}

} // namespace banditmt::cli
