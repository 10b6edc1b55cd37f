#include "banditmt/cli/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "banditmt/error.hpp"

namespace banditmt::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &path) {
    for (const auto &[key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown field");
        }
    }
}

const json &require_object(const json &doc, const std::string &key, const std::string &path) {
    if (!doc.contains(key)) {
        throw ConfigError(path + key + ": required field missing");
    }
    if (!doc.at(key).is_object()) {
        throw ConfigError(path + key + ": expected an object");
    }
    return doc.at(key);
}

double number(const json &obj, const std::string &key, double fallback, const std::string &path) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

std::size_t count(const json &obj, const std::string &key, std::size_t fallback, const std::string &path) {
    if (!obj.contains(key)) return fallback;
    if (!(obj.at(key).is_number_integer() && obj.at(key) >= 0)) throw ConfigError(path + "." + key + ": expected a nonnegative integer");
    return obj.at(key).get<std::size_t>();
}

bool boolean(const json &obj, const std::string &key, bool fallback, const std::string &path) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ConfigError(path + "." + key + ": expected true or false");
    return obj.at(key).get<bool>();
}

std::string string(const json &obj, const std::string &key, const std::string &path) {
    if (!obj.contains(key)) throw ConfigError(path + "." + key + ": required field missing");
    if (!obj.at(key).is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

template <class Parse> auto parse_enum(const json &obj, const std::string &key, const std::string &path, Parse parse) {
    const std::string value = string(obj, key, path);
    try {
        return parse(value);
    } catch (const ConfigError &e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

std::vector<double> number_list(const json &v, const std::string &path) {
    if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

RewardConfig parse_reward(const json &doc) {
    RewardConfig r;
    if (!doc.contains("reward")) {
        return r;
    }
    const json &j = require_object(doc, "reward", "");
    reject_unknown(j, {"lambda", "mode", "normalization", "tokenizer"}, "reward");
    r.lambda = number(j, "lambda", r.lambda, "reward");
    if (j.contains("mode")) r.mode = parse_enum(j, "mode", "reward", parse_reward_mode);
    if (j.contains("tokenizer")) r.tokenizer = parse_enum(j, "tokenizer", "reward", parse_tokenizer);
    if (j.contains("normalization")) {
        const json &n = require_object(j, "normalization", "reward.");
        reject_unknown(n, {"bleu", "comet", "cometkiwi"}, "reward.normalization");
        auto affine = [&](const char *metric, AffineNormalization &target) {
            if (!n.contains(metric)) return;
            const std::string path = std::string("reward.normalization.") + metric;
            const json &m = n.at(metric);
            if (!m.is_object()) throw ConfigError(path + ": expected an object");
            reject_unknown(m, {"scale", "offset"}, path);
            target.scale = number(m, "scale", target.scale, path);
            target.offset = number(m, "offset", target.offset, path);
        };
        affine("bleu", r.bleu);
        affine("comet", r.comet);
        affine("cometkiwi", r.cometkiwi);
    }
    r.validate();
    return r;
}

SyntheticSpec parse_synthetic(const json &env) {
    const std::string path = "environment";
    reject_unknown(env, {"kind", "world", "probabilities", "thetas", "noise_sd", "contexts", "horizon"}, path);
    SyntheticSpec s;
    s.kind = parse_enum(env, "world", path, parse_synthetic_kind);
    s.horizon = count(env, "horizon", s.horizon, path);
    if (s.kind == SyntheticKind::bernoulli) {
        if (!env.contains("probabilities")) throw ConfigError(path + ".probabilities: required for bernoulli worlds");
        s.probabilities = number_list(env.at("probabilities"), path + ".probabilities");
    } else {
        if (!env.contains("thetas")) throw ConfigError(path + ".thetas: required for linear_gaussian worlds");
        const json &t = env.at("thetas");
        if (!t.is_array()) throw ConfigError(path + ".thetas: expected an array of arrays");
        for (std::size_t a = 0; a < t.size(); ++a) {
            s.thetas.push_back(number_list(t[a], path + ".thetas[" + std::to_string(a) + "]"));
        }
        s.noise_sd = number(env, "noise_sd", s.noise_sd, path);
        if (env.contains("contexts")) s.contexts = parse_enum(env, "contexts", path, parse_context_distribution);
    }
    try {
        s.validate();
    } catch (const ConfigError &e) {
        std::string msg = e.what();
        if (msg.rfind("synthetic.", 0) == 0) msg = path + msg.substr(9);
        throw ConfigError(msg);
    }
    return s;
}

ReplaySource parse_replay(const json &env, const std::filesystem::path &base_dir) {
    const std::string path = "environment";
    reject_unknown(env, {"kind", "log", "explore", "test", "passes", "freeze_on_test"}, path);
    ReplaySource r;
    r.log = string(env, "log", path);
    const std::filesystem::path p(r.log);
    r.log_path = p.is_absolute() ? p : base_dir / p;
    r.options.explore_rows = count(env, "explore", r.options.explore_rows, path);
    r.options.test_rows = count(env, "test", r.options.test_rows, path);
    r.options.explore_passes = count(env, "passes", r.options.explore_passes, path);
    r.options.freeze_on_test = boolean(env, "freeze_on_test", r.options.freeze_on_test, path);
    if (r.options.test_rows == 0) throw ConfigError(path + ".test: must be positive");
    return r;
}

std::vector<std::uint64_t> parse_seeds(const json &doc) {
    if (!doc.contains("seeds")) return {0};
    const json &s = doc.at("seeds");
    std::vector<std::uint64_t> seeds;
    if (s.is_array()) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!(s[i].is_number_integer() && s[i] >= 0)) throw ConfigError("seeds[" + std::to_string(i) + "]: expected a nonnegative integer");
            seeds.push_back(s[i].get<std::uint64_t>());
        }
    } else if (s.is_object()) {
        reject_unknown(s, {"first", "count"}, "seeds");
        const auto first = count(s, "first", 0, "seeds");
        const auto n = count(s, "count", 1, "seeds");
        for (std::size_t i = 0; i < n; ++i) seeds.push_back(first + i);
    } else {
        throw ConfigError("seeds: expected an array or {first, count}");
    }
    if (seeds.empty()) throw ConfigError("seeds: need at least one seed");
    return seeds;
}

std::vector<std::string> split_kinds(const std::string &list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<PolicySpec> parse_policies(const std::vector<std::string> &kinds, const json &params,
                                       const std::string &kind_path) {
    if (kinds.empty()) throw ConfigError(kind_path + ": need at least one policy");
    std::vector<PolicySpec> out;
    std::set<PolicyKind> seen;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        PolicyKind kind;
        try {
            kind = parse_policy_kind(kinds[i]);
        } catch (const ConfigError &e) {
            throw ConfigError(kind_path + ": " + e.what());
        }
        if (!seen.insert(kind).second) throw ConfigError(kind_path + ": policy '" + kinds[i] + "' listed twice");
        const std::string name(to_string(kind));
        json block = json::object();
        // Accept the block under the canonical name or the alias used in "policy".
        for (const auto &key : {name, kinds[i]}) {
            if (params.contains(key)) {
                block = params.at(key);
                break;
            }
        }
        out.push_back(parse_policy_spec(kind, block, "policy_params." + name));
    }
    return out;
}

std::vector<std::string> policy_names(const json &doc) {
    if (!doc.contains("policy")) throw ConfigError("policy: required field missing");
    const json &p = doc.at("policy");
    std::vector<std::string> names;
    if (p.is_string()) {
        names = split_kinds(p.get<std::string>());
    } else if (p.is_array()) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!p[i].is_string()) throw ConfigError("policy[" + std::to_string(i) + "]: expected a policy name");
            names.push_back(p[i].get<std::string>());
        }
    } else {
        throw ConfigError("policy: expected a name or a list of names");
    }
    return names;
}

} // namespace

RunConfig parse_run_config(const json &doc, const std::filesystem::path &base_dir) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown(doc, {"version", "policy", "policy_params", "reward", "environment", "seeds", "workers", "output", "csv"},
                   "");
    if (!doc.contains("version")) throw ConfigError("version: required field missing");
    if (!doc.at("version").is_number_integer() || doc.at("version").get<int>() != kConfigVersion) {
        throw ConfigError("version: unsupported config version (expected " + std::to_string(kConfigVersion) + ")");
    }
    RunConfig c;
    const json params = doc.contains("policy_params") ? require_object(doc, "policy_params", "") : json::object();
    for (const auto &[key, value] : params.items()) {
        try {
            (void)parse_policy_kind(key);
        } catch (const ConfigError &) {
            throw ConfigError("policy_params." + key + ": unknown policy");
        }
    }
    c.policies = parse_policies(policy_names(doc), params, "policy");
    c.reward = parse_reward(doc);

    const json &env = require_object(doc, "environment", "");
    const std::string kind = string(env, "kind", "environment");
    if (kind == "synthetic") {
        c.environment = parse_synthetic(env);
    } else if (kind == "replay") {
        c.environment = parse_replay(env, base_dir);
    } else {
        throw ConfigError("environment.kind: expected synthetic or replay, got '" + kind + "'");
    }
    c.seeds = parse_seeds(doc);
    c.workers = count(doc, "workers", c.workers, "config");
    if (c.workers == 0) throw ConfigError("workers: must be positive");
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) throw ConfigError("output: expected a path string");
        c.output = doc.at("output").get<std::string>();
    }
    c.csv = boolean(doc, "csv", c.csv, "config");

    c.policy_params = params;
    return c;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc, path.parent_path());
}

} // namespace banditmt::cli

namespace banditmt::cli {

void apply_overrides(RunConfig &config, const Overrides &o) {
    if (o.seed) config.seeds = {*o.seed};
    if (o.policy) config.policies = parse_policies(split_kinds(*o.policy), config.policy_params, "--policy");
    if (o.output) config.output = *o.output;
    if (o.workers) {
        if (*o.workers == 0) throw ConfigError("--workers: must be positive");
        config.workers = *o.workers;
    }
    if (o.passes || o.freeze_on_test) {
        auto *replay = std::get_if<ReplaySource>(&config.environment);
        if (replay == nullptr) {
            throw ConfigError(std::string(o.passes ? "--passes" : "--freeze-on-test") +
                              ": only valid for replay environments");
        }
        if (o.passes) replay->options.explore_passes = *o.passes;
        if (o.freeze_on_test) replay->options.freeze_on_test = true;
    }
}

namespace {

json affine_json(const AffineNormalization &n) { return {{"scale", n.scale}, {"offset", n.offset}}; }

json environment_json(const EnvironmentConfig &env) {
    if (const auto *s = std::get_if<SyntheticSpec>(&env)) {
        json j = {{"kind", "synthetic"}, {"world", to_string(s->kind)}, {"horizon", s->horizon}};
        if (s->kind == SyntheticKind::bernoulli) {
            j["probabilities"] = s->probabilities;
        } else {
            j["thetas"] = s->thetas;
            j["noise_sd"] = s->noise_sd;
            j["contexts"] = to_string(s->contexts);
        }
        return j;
    }
    const auto &r = std::get<ReplaySource>(env);
    return {{"kind", "replay"},
            {"log", r.log},
            {"explore", r.options.explore_rows},
            {"test", r.options.test_rows},
            {"passes", r.options.explore_passes},
            {"freeze_on_test", r.options.freeze_on_test}};
}

} // namespace

json resolved_config(const RunConfig &config, const PolicySpec &policy) {
    const RewardConfig &r = config.reward;
    json reward = {{"lambda", r.lambda},
                   {"mode", to_string(r.mode)},
                   {"tokenizer", to_string(r.tokenizer)},
                   {"normalization",
                    {{"bleu", affine_json(r.bleu)}, {"comet", affine_json(r.comet)}, {"cometkiwi", affine_json(r.cometkiwi)}}}};
    return {{"version", kConfigVersion},
            {"policy", to_json(policy)},
            {"reward", reward},
            {"environment", environment_json(config.environment)}};
}

std::string config_digest(const json &resolved) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : resolved.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace banditmt::cli
