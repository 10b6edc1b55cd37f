#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "banditmt/linucb.hpp"
#include "banditmt/mlp.hpp"

namespace banditmt {

struct NeuralLinUcbConfig {
    double alpha = 1.5;
    double ridge = 1.0;
    std::vector<std::size_t> hidden{50, 50};
    std::size_t latent_dim = 50;
    Activation activation = Activation::tanh;
    double learning_rate = 1e-3;
    std::size_t train_every = 32; ///< rounds between training passes; 0 disables training
    std::size_t epochs = 5;
    std::size_t batch_size = 16;
    std::size_t buffer_capacity = 4096; ///< FIFO; oldest samples are evicted first
};

void validate(const NeuralLinUcbConfig &config);

struct BufferedSample {
    std::vector<double> context;
    ArmId arm;
    double reward = 0.0;

    friend bool operator==(const BufferedSample &, const BufferedSample &) = default;
};

/// LinUCB on top of a learned feature map z = f(x; w).
///
/// Every update feeds z into the LinUCB head immediately. Every
/// `train_every` updates the network is refit for `epochs` passes of
/// mini-batch gradient descent on the replay buffer, minimizing
/// (theta_a . f(x; w) - r)^2 with the head's current theta held fixed; the
/// head is then rebuilt from the buffer under the new features.
class NeuralLinUcbPolicy final : public Policy {
  public:
    /// Fresh network with Glorot init drawn from a stream derived from `seed`.
    NeuralLinUcbPolicy(std::size_t num_arms, std::size_t dim, NeuralLinUcbConfig config, std::uint64_t seed);
    /// Uses the given network; config.hidden/latent_dim/activation are
    /// overwritten to describe it.
    NeuralLinUcbPolicy(std::size_t num_arms, Mlp network, NeuralLinUcbConfig config, std::uint64_t seed);

    PolicyKind kind() const noexcept override { return PolicyKind::neural_linucb; }
    std::size_t context_dim() const noexcept override { return network_.input_dim(); }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<NeuralLinUcbPolicy>(*this); }

    const NeuralLinUcbConfig &config() const noexcept { return config_; }
    const Mlp &network() const noexcept { return network_; }
    const LinUcbModel &head() const noexcept { return head_; }
    const std::deque<BufferedSample> &buffer() const noexcept { return buffer_; }
    std::uint64_t training_passes() const noexcept { return training_passes_; }

    linalg::Vector features(ContextView x) const { return network_.forward(x); }

    /// Mean squared prediction error of the head over the buffer.
    double buffer_loss() const;

    /// Runs one training pass immediately (normally triggered by update()).
    void train();

    static NeuralLinUcbPolicy from_json(const nlohmann::json &state);

  protected:
    ArmId do_select(ContextView context, RngStream &rng) const override;
    void do_update(ArmId arm, ContextView context, RewardSignal reward) override;
    nlohmann::json state_json() const override;

  private:
    explicit NeuralLinUcbPolicy(std::size_t num_arms) : Policy(num_arms) {}

    std::vector<FeatureSample> feature_samples(const std::vector<linalg::Vector> &thetas) const;
    void rebuild_head();

    NeuralLinUcbConfig config_;
    Mlp network_;
    LinUcbModel head_;
    std::deque<BufferedSample> buffer_;
    RngStream train_rng_;
    std::uint64_t rounds_ = 0;
    std::uint64_t training_passes_ = 0;
};

} // namespace banditmt
