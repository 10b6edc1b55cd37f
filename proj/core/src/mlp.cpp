#include "banditmt/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "banditmt/error.hpp"

namespace banditmt {

std::string_view to_string(Activation a) noexcept {
    return a == Activation::tanh ? "tanh" : "identity";
}

Activation parse_activation(std::string_view name) {
    if (name == "tanh") return Activation::tanh;
    if (name == "identity") return Activation::identity;
    throw ConfigError("unknown activation '" + std::string(name) + "' (expected tanh or identity)");
}

Mlp::Mlp(std::size_t input_dim, const std::vector<std::size_t> &hidden, std::size_t output_dim,
         Activation activation, RngStream &init_rng)
    : activation_(activation) {
    if (input_dim == 0 || output_dim == 0) {
        throw ConfigError("mlp: input and output dimensions must be positive");
    }
    std::size_t in = input_dim;
    auto add_layer = [&](std::size_t out) {
        if (out == 0) {
            throw ConfigError("mlp: layer width must be positive");
        }
        DenseLayer layer{in, out, std::vector<double>(in * out), std::vector<double>(out, 0.0)};
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        for (auto &w : layer.weights) {
            w = (2.0 * init_rng.uniform() - 1.0) * limit;
        }
        layers_.push_back(std::move(layer));
        in = out;
    };
    for (std::size_t width : hidden) {
        add_layer(width);
    }
    add_layer(output_dim);
}

Mlp Mlp::identity(std::size_t dim, std::size_t hidden_layers) {
    Mlp net;
    net.activation_ = Activation::identity;
    for (std::size_t l = 0; l <= hidden_layers; ++l) {
        DenseLayer layer{dim, dim, std::vector<double>(dim * dim, 0.0), std::vector<double>(dim, 0.0)};
        for (std::size_t i = 0; i < dim; ++i) {
            layer.weights[i * dim + i] = 1.0;
        }
        net.layers_.push_back(std::move(layer));
    }
    return net;
}

double Mlp::activate(double v) const noexcept {
    return activation_ == Activation::tanh ? std::tanh(v) : v;
}

double Mlp::activate_derivative(double activated) const noexcept {
    return activation_ == Activation::tanh ? 1.0 - activated * activated : 1.0;
}

namespace {

void affine(const DenseLayer &layer, std::span<const double> in, linalg::Vector &out) {
    out.assign(layer.out, 0.0);
    for (std::size_t i = 0; i < layer.out; ++i) {
        const std::span<const double> row(layer.weights.data() + i * layer.in, layer.in);
        out[i] = linalg::dot(row, in) + layer.bias[i];
    }
}

} // namespace

linalg::Vector Mlp::forward(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        throw DataError("mlp input dimension " + std::to_string(x.size()) + " != " + std::to_string(input_dim()));
    }
    linalg::Vector current(x.begin(), x.end());
    linalg::Vector next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        affine(layers_[l], current, next);
        if (l + 1 < layers_.size()) {
            for (auto &v : next) {
                v = activate(v);
            }
        }
        current.swap(next);
    }
    return current;
}

double Mlp::loss(std::span<const FeatureSample> samples) const {
    if (samples.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto &s : samples) {
        const double err = linalg::dot(s.head, forward(s.input)) - s.target;
        total += err * err;
    }
    return total / static_cast<double>(samples.size());
}

std::size_t Mlp::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto &layer : layers_) {
        n += layer.weights.size() + layer.bias.size();
    }
    return n;
}

linalg::Vector Mlp::loss_gradient(std::span<const FeatureSample> samples) const {
    linalg::Vector grad(parameter_count(), 0.0);
    if (samples.empty()) {
        return grad;
    }
    const double scale = 2.0 / static_cast<double>(samples.size());
    const std::size_t depth = layers_.size();

    // Offsets of each layer's block within the flattened parameter vector.
    std::vector<std::size_t> offset(depth, 0);
    for (std::size_t l = 1; l < depth; ++l) {
        offset[l] = offset[l - 1] + layers_[l - 1].weights.size() + layers_[l - 1].bias.size();
    }

    std::vector<linalg::Vector> acts(depth + 1);
    linalg::Vector delta;
    linalg::Vector prev_delta;
    for (const auto &s : samples) {
        acts[0].assign(s.input.begin(), s.input.end());
        for (std::size_t l = 0; l < depth; ++l) {
            affine(layers_[l], acts[l], acts[l + 1]);
            if (l + 1 < depth) {
                for (auto &v : acts[l + 1]) {
                    v = activate(v);
                }
            }
        }
        const double err = linalg::dot(s.head, acts[depth]) - s.target;
        delta.assign(s.head.begin(), s.head.end());
        for (auto &v : delta) {
            v *= scale * err;
        }
        for (std::size_t l = depth; l-- > 0;) {
            const auto &layer = layers_[l];
            const auto &input = acts[l];
            double *gw = grad.data() + offset[l];
            double *gb = gw + layer.weights.size();
            for (std::size_t i = 0; i < layer.out; ++i) {
                gb[i] += delta[i];
                for (std::size_t j = 0; j < layer.in; ++j) {
                    gw[i * layer.in + j] += delta[i] * input[j];
                }
            }
            if (l == 0) {
                break;
            }
            prev_delta.assign(layer.in, 0.0);
            for (std::size_t i = 0; i < layer.out; ++i) {
                for (std::size_t j = 0; j < layer.in; ++j) {
                    prev_delta[j] += layer.weights[i * layer.in + j] * delta[i];
                }
            }
            for (std::size_t j = 0; j < layer.in; ++j) {
                prev_delta[j] *= activate_derivative(input[j]);
            }
            delta.swap(prev_delta);
        }
    }
    return grad;
}

void Mlp::gradient_step(std::span<const FeatureSample> samples, double learning_rate) {
    const auto grad = loss_gradient(samples);
    auto params = parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] -= learning_rate * grad[i];
    }
    set_parameters(params);
}

linalg::Vector Mlp::parameters() const {
    linalg::Vector p;
    p.reserve(parameter_count());
    for (const auto &layer : layers_) {
        p.insert(p.end(), layer.weights.begin(), layer.weights.end());
        p.insert(p.end(), layer.bias.begin(), layer.bias.end());
    }
    return p;
}

void Mlp::set_parameters(std::span<const double> params) {
    if (params.size() != parameter_count()) {
        throw std::invalid_argument("mlp: parameter vector has wrong length");
    }
    std::size_t k = 0;
    for (auto &layer : layers_) {
        for (auto &w : layer.weights) w = params[k++];
        for (auto &b : layer.bias) b = params[k++];
    }
}

nlohmann::json Mlp::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto &layer : layers_) {
        layers.push_back({{"in", layer.in}, {"out", layer.out}, {"weights", layer.weights}, {"bias", layer.bias}});
    }
    return {{"activation", std::string(to_string(activation_))}, {"layers", layers}};
}

Mlp Mlp::from_json(const nlohmann::json &j) {
    Mlp net;
    net.activation_ = parse_activation(j.at("activation").get<std::string>());
    std::size_t expected_in = 0;
    for (const auto &jl : j.at("layers")) {
        DenseLayer layer{jl.at("in").get<std::size_t>(), jl.at("out").get<std::size_t>(),
                         jl.at("weights").get<std::vector<double>>(), jl.at("bias").get<std::vector<double>>()};
        if (layer.weights.size() != layer.in * layer.out || layer.bias.size() != layer.out ||
            (expected_in != 0 && layer.in != expected_in)) {
            throw DataError("mlp snapshot: inconsistent layer shapes");
        }
        expected_in = layer.out;
        net.layers_.push_back(std::move(layer));
    }
    if (net.layers_.empty()) {
        throw DataError("mlp snapshot: no layers");
    }
    return net;
}

} // namespace banditmt
