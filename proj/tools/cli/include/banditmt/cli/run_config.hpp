#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "banditmt/policy_factory.hpp"
#include "banditmt/replay_env.hpp"
#include "banditmt/reward.hpp"
#include "banditmt/synthetic_env.hpp"

namespace banditmt::cli {

inline constexpr int kConfigVersion = 1;

struct ReplaySource {
    std::string log;                 ///< as written in the config
    std::filesystem::path log_path;  ///< resolved against the config's directory
    ReplayOptions options;
};

using EnvironmentConfig = std::variant<SyntheticSpec, ReplaySource>;

struct RunConfig {
    std::vector<PolicySpec> policies;
    RewardConfig reward;
    EnvironmentConfig environment;
    std::vector<std::uint64_t> seeds{0};
    std::size_t workers = 1;
    std::filesystem::path output = "out"; ///< relative to the working directory
    bool csv = false;
    nlohmann::json policy_params = nlohmann::json::object(); ///< kept for --policy

    bool is_replay() const noexcept { return std::holds_alternative<ReplaySource>(environment); }
};

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy; ///< comma-separated kinds
    std::optional<std::filesystem::path> output;
    std::optional<std::size_t> passes;
    bool freeze_on_test = false;
    std::optional<std::size_t> workers;
};

/// Validates the whole document; the first problem raises ConfigError with
/// its field path. `base_dir` anchors relative log paths.
RunConfig parse_run_config(const nlohmann::json &doc, const std::filesystem::path &base_dir);
RunConfig load_run_config(const std::filesystem::path &path);

/// Applies flags on top of file values. Throws ConfigError on misuse
/// (e.g. --passes with a synthetic environment).
void apply_overrides(RunConfig &config, const Overrides &overrides);

/// Everything that determines a run's results for one policy, seeds
/// excluded. Canonical (sorted keys), so identical inputs dump identically.
nlohmann::json resolved_config(const RunConfig &config, const PolicySpec &policy);

/// 16 hex digits of FNV-1a/64 over the canonical dump of `resolved`.
std::string config_digest(const nlohmann::json &resolved);

} // namespace banditmt::cli
