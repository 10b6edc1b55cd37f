#include "banditmt/policy_factory.hpp"

#include <set>

#include "banditmt/error.hpp"
#include "banditmt/thompson.hpp"

namespace banditmt {

namespace {

using nlohmann::json;

void reject_unknown(const json &params, const std::set<std::string> &known, const std::string &path) {
    for (const auto &[key, value] : params.items()) {
        if (!known.contains(key)) {
            throw ConfigError(path + "." + key + ": unknown parameter");
        }
    }
}

double get_number(const json &params, const char *key, double fallback, const std::string &path) {
    if (!params.contains(key)) {
        return fallback;
    }
    const auto &v = params.at(key);
    if (!v.is_number()) {
        throw ConfigError(path + "." + key + ": expected a number");
    }
    return v.get<double>();
}

std::size_t get_count(const json &params, const char *key, std::size_t fallback, const std::string &path) {
    if (!params.contains(key)) {
        return fallback;
    }
    const auto &v = params.at(key);
    if (!(v.is_number_integer() && v >= 0)) {
        throw ConfigError(path + "." + key + ": expected a nonnegative integer");
    }
    return v.get<std::size_t>();
}

// Rewrites "<kind>.<field>: ..." messages thrown by constructors into the
// caller's field path.
[[noreturn]] void rethrow_with_path(const ConfigError &e, const std::string &path) {
    std::string msg = e.what();
    const auto dot = msg.find('.');
    const auto colon = msg.find(':');
    if (dot != std::string::npos && colon != std::string::npos && dot < colon) {
        msg = path + msg.substr(dot);
    } else {
        msg = path + ": " + msg;
    }
    throw ConfigError(msg);
}

} // namespace

PolicySpec parse_policy_spec(PolicyKind kind, const json &params, const std::string &path) {
    if (!params.is_object()) {
        throw ConfigError(path + ": expected an object");
    }
    PolicySpec spec;
    spec.kind = kind;
    switch (kind) {
    case PolicyKind::ucb:
        reject_unknown(params, {"alpha"}, path);
        spec.ucb.alpha = get_number(params, "alpha", spec.ucb.alpha, path);
        if (!(spec.ucb.alpha >= 0.0)) {
            throw ConfigError(path + ".alpha: must be >= 0");
        }
        break;
    case PolicyKind::thompson:
        reject_unknown(params, {}, path);
        break;
    case PolicyKind::linucb:
        reject_unknown(params, {"alpha", "ridge"}, path);
        spec.linucb.alpha = get_number(params, "alpha", spec.linucb.alpha, path);
        spec.linucb.ridge = get_number(params, "ridge", spec.linucb.ridge, path);
        if (!(spec.linucb.alpha >= 0.0)) {
            throw ConfigError(path + ".alpha: must be >= 0");
        }
        if (!(spec.linucb.ridge > 0.0)) {
            throw ConfigError(path + ".ridge: must be > 0");
        }
        break;
    case PolicyKind::neural_linucb: {
        reject_unknown(params,
                       {"alpha", "ridge", "hidden", "latent_dim", "activation", "learning_rate", "train_every",
                        "epochs", "batch_size", "buffer_capacity"},
                       path);
        auto &n = spec.neural;
        n.alpha = get_number(params, "alpha", n.alpha, path);
        n.ridge = get_number(params, "ridge", n.ridge, path);
        if (params.contains("hidden")) {
            const auto &h = params.at("hidden");
            if (!h.is_array()) {
                throw ConfigError(path + ".hidden: expected an array of layer widths");
            }
            n.hidden.clear();
            for (const auto &w : h) {
                if (!(w.is_number_integer() && w >= 0)) {
                    throw ConfigError(path + ".hidden: expected nonnegative integers");
                }
                n.hidden.push_back(w.get<std::size_t>());
            }
        }
        n.latent_dim = get_count(params, "latent_dim", n.latent_dim, path);
        if (params.contains("activation")) {
            if (!params.at("activation").is_string()) {
                throw ConfigError(path + ".activation: expected a string");
            }
            try {
                n.activation = parse_activation(params.at("activation").get<std::string>());
            } catch (const ConfigError &e) {
                throw ConfigError(path + ".activation: " + e.what());
            }
        }
        n.learning_rate = get_number(params, "learning_rate", n.learning_rate, path);
        n.train_every = get_count(params, "train_every", n.train_every, path);
        n.epochs = get_count(params, "epochs", n.epochs, path);
        n.batch_size = get_count(params, "batch_size", n.batch_size, path);
        n.buffer_capacity = get_count(params, "buffer_capacity", n.buffer_capacity, path);
        if (!(n.alpha >= 0.0)) {
            throw ConfigError(path + ".alpha: must be >= 0");
        }
        if (!(n.ridge > 0.0)) {
            throw ConfigError(path + ".ridge: must be > 0");
        }
        try {
            validate(n);
        } catch (const ConfigError &e) {
            rethrow_with_path(e, path);
        }
        break;
    }
    }
    return spec;
}

json to_json(const PolicySpec &spec) {
    json params = json::object();
    switch (spec.kind) {
    case PolicyKind::ucb:
        params["alpha"] = spec.ucb.alpha;
        break;
    case PolicyKind::thompson:
        break;
    case PolicyKind::linucb:
        params["alpha"] = spec.linucb.alpha;
        params["ridge"] = spec.linucb.ridge;
        break;
    case PolicyKind::neural_linucb: {
        const auto &n = spec.neural;
        params = {{"alpha", n.alpha},
                  {"ridge", n.ridge},
                  {"hidden", n.hidden},
                  {"latent_dim", n.latent_dim},
                  {"activation", std::string(to_string(n.activation))},
                  {"learning_rate", n.learning_rate},
                  {"train_every", n.train_every},
                  {"epochs", n.epochs},
                  {"batch_size", n.batch_size},
                  {"buffer_capacity", n.buffer_capacity}};
        break;
    }
    }
    return {{"kind", std::string(to_string(spec.kind))}, {"params", params}};
}

std::unique_ptr<Policy> make_policy(const PolicySpec &spec, std::size_t num_arms, std::size_t dim,
                                    std::uint64_t seed) {
    switch (spec.kind) {
    case PolicyKind::ucb:
        return std::make_unique<UcbPolicy>(num_arms, spec.ucb);
    case PolicyKind::thompson:
        return std::make_unique<ThompsonPolicy>(num_arms);
    case PolicyKind::linucb:
        if (dim == 0) {
            throw DataError("linucb needs contexts, but the environment provides none");
        }
        return std::make_unique<LinUcbPolicy>(num_arms, dim, spec.linucb);
    case PolicyKind::neural_linucb:
        if (dim == 0) {
            throw DataError("neural_linucb needs contexts, but the environment provides none");
        }
        return std::make_unique<NeuralLinUcbPolicy>(num_arms, dim, spec.neural, seed);
    }
    throw std::logic_error("unreachable policy kind");
}

} // namespace banditmt
