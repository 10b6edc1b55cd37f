#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "banditmt/linalg.hpp"
#include "banditmt/rng.hpp"

namespace banditmt {

enum class Activation {
    tanh,
    identity, ///< test-harness mode: makes the network an affine map
};

std::string_view to_string(Activation a) noexcept;
Activation parse_activation(std::string_view name);

/// Fully connected layer, weights stored row-major as out x in.
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

/// One regression example for the feature network: the loss term is
/// (head . f(input) - target)^2 with the head held fixed.
struct FeatureSample {
    std::span<const double> input;
    std::span<const double> head;
    double target = 0.0;
};

/// Feed-forward feature map f(x; w) : R^d -> R^m.
///
/// Hidden layers apply the activation; the output layer is linear.
class Mlp {
  public:
    Mlp() = default;
    /// Glorot-uniform weights, zero biases.
    Mlp(std::size_t input_dim, const std::vector<std::size_t> &hidden, std::size_t output_dim,
        Activation activation, RngStream &init_rng);

    /// Square identity weights, zero biases, identity activation: f(x) = x.
    static Mlp identity(std::size_t dim, std::size_t hidden_layers = 2);

    std::size_t input_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().in; }
    std::size_t output_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().out; }
    Activation activation() const noexcept { return activation_; }
    const std::vector<DenseLayer> &layers() const noexcept { return layers_; }

    linalg::Vector forward(std::span<const double> x) const;

    /// Mean squared error over the samples.
    double loss(std::span<const FeatureSample> samples) const;
    /// Gradient of loss() with respect to parameters(), by backpropagation.
    linalg::Vector loss_gradient(std::span<const FeatureSample> samples) const;
    /// One gradient-descent step on the given batch.
    void gradient_step(std::span<const FeatureSample> samples, double learning_rate);

    /// Flattened parameters: for each layer, weights (row-major) then bias.
    std::size_t parameter_count() const noexcept;
    linalg::Vector parameters() const;
    void set_parameters(std::span<const double> params);

    nlohmann::json to_json() const;
    static Mlp from_json(const nlohmann::json &j);

    friend bool operator==(const Mlp &, const Mlp &) = default;

  private:
    double activate(double v) const noexcept;
    double activate_derivative(double activated) const noexcept;

    Activation activation_ = Activation::tanh;
    std::vector<DenseLayer> layers_;
};

} // namespace banditmt
