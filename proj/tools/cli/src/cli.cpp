#include <ostream>

#include <CLI11.hpp>

#include "banditmt/cli/commands.hpp"
#include "banditmt/error.hpp"

namespace banditmt::cli {

namespace {

struct RunFlags {
    std::string config;
    Overrides overrides;
};

void add_run_flags(CLI::App &cmd, RunFlags &flags, bool replay_flags) {
    cmd.add_option("-c,--config", flags.config, "run config (JSON)")->required();
    cmd.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t &v) { flags.overrides.seed = v; },
                                           "run this single seed instead of the configured list");
    cmd.add_option_function<std::string>("--policy", [&](const std::string &v) { flags.overrides.policy = v; },
                                         "policy kind(s), comma separated: ucb, ts, linucb, neural_linucb");
    cmd.add_option_function<std::string>("--out", [&](const std::string &v) { flags.overrides.output = v; },
                                         "output directory");
    cmd.add_option_function<std::size_t>("--workers", [&](const std::size_t &v) { flags.overrides.workers = v; },
                                         "seeds run in parallel");
    if (replay_flags) {
        cmd.add_option_function<std::size_t>("--passes", [&](const std::size_t &v) { flags.overrides.passes = v; },
                                             "passes over the explore split");
        cmd.add_flag("--freeze-on-test", flags.overrides.freeze_on_test, "select without updating on the test split");
    }
}

RunConfig prepare(const RunFlags &flags) {
    RunConfig config = load_run_config(flags.config);
    apply_overrides(config, flags.overrides);
    return config;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"banditmt: bandit selection of machine translation systems"};
    app.require_subcommand(1);

    RunFlags sim_flags;
    auto *sim = app.add_subcommand("simulate", "run policies in a synthetic world");
    add_run_flags(*sim, sim_flags, false);

    RunFlags rep_flags;
    auto *rep = app.add_subcommand("replay", "replay a recorded score log");
    add_run_flags(*rep, rep_flags, true);

    std::string log_path;
    auto *val = app.add_subcommand("validate-log", "check a replay log and list every violation");
    val->add_option("log", log_path, "replay log (JSON lines)")->required();

    std::vector<std::string> inputs;
    std::string report_out;
    auto *rpt = app.add_subcommand("report", "aggregate per-seed reports");
    rpt->add_option("inputs", inputs, "seed_*.json files or directories holding them")->required();
    rpt->add_option("--out", report_out, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (*sim) {
            simulate(prepare(sim_flags), out);
        } else if (*rep) {
            replay(prepare(rep_flags), out);
        } else if (*val) {
            return validate_log(log_path, out) ? exit_ok : exit_data_error;
        } else if (*rpt) {
            std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
            report(paths, report_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(report_out), out);
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const DataError &e) {
        err << "data error: " << e.what() << '\n';
        return exit_data_error;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_ok;
}

} // namespace banditmt::cli
