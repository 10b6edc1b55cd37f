#include "banditmt/neural_linucb.hpp"

#include <cmath>
#include <numeric>

#include "banditmt/error.hpp"

namespace banditmt {

void validate(const NeuralLinUcbConfig &c) {
    if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) {
        throw ConfigError("neural_linucb.learning_rate: must be a finite value > 0");
    }
    if (c.latent_dim == 0) {
        throw ConfigError("neural_linucb.latent_dim: must be positive");
    }
    if (c.batch_size == 0) {
        throw ConfigError("neural_linucb.batch_size: must be positive");
    }
    if (c.buffer_capacity == 0) {
        throw ConfigError("neural_linucb.buffer_capacity: must be positive");
    }
    for (std::size_t w : c.hidden) {
        if (w == 0) {
            throw ConfigError("neural_linucb.hidden: layer widths must be positive");
        }
    }
}

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kTrainStream = 2;

} // namespace

NeuralLinUcbPolicy::NeuralLinUcbPolicy(std::size_t num_arms, std::size_t dim, NeuralLinUcbConfig config,
                                       std::uint64_t seed)
    : Policy(num_arms), config_(std::move(config)), train_rng_(mix_seed(seed, kTrainStream)) {
    validate(config_);
    if (dim == 0) {
        throw ConfigError("neural_linucb: context dimension must be positive");
    }
    RngStream init_rng(mix_seed(seed, kInitStream));
    network_ = Mlp(dim, config_.hidden, config_.latent_dim, config_.activation, init_rng);
    head_ = LinUcbModel(num_arms, config_.latent_dim, {config_.alpha, config_.ridge});
}

NeuralLinUcbPolicy::NeuralLinUcbPolicy(std::size_t num_arms, Mlp network, NeuralLinUcbConfig config,
                                       std::uint64_t seed)
    : Policy(num_arms), config_(std::move(config)), network_(std::move(network)),
      train_rng_(mix_seed(seed, kTrainStream)) {
    config_.hidden.clear();
    for (std::size_t l = 0; l + 1 < network_.layers().size(); ++l) {
        config_.hidden.push_back(network_.layers()[l].out);
    }
    config_.latent_dim = network_.output_dim();
    config_.activation = network_.activation();
    validate(config_);
    head_ = LinUcbModel(num_arms, config_.latent_dim, {config_.alpha, config_.ridge});
}

ArmId NeuralLinUcbPolicy::do_select(ContextView context, RngStream &rng) const {
    const auto z = network_.forward(context);
    return head_.select(z, rng);
}

void NeuralLinUcbPolicy::do_update(ArmId arm, ContextView context, RewardSignal reward) {
    buffer_.push_back({std::vector<double>(context.begin(), context.end()), arm, reward.value()});
    if (buffer_.size() > config_.buffer_capacity) {
        buffer_.pop_front();
    }
    head_.update(arm, network_.forward(context), reward.value());
    ++rounds_;
    if (config_.train_every > 0 && rounds_ % config_.train_every == 0) {
        train();
    }
}

std::vector<FeatureSample> NeuralLinUcbPolicy::feature_samples(const std::vector<linalg::Vector> &thetas) const {
    std::vector<FeatureSample> samples;
    samples.reserve(buffer_.size());
    for (const auto &s : buffer_) {
        samples.push_back({s.context, thetas[s.arm.value()], s.reward});
    }
    return samples;
}

double NeuralLinUcbPolicy::buffer_loss() const {
    std::vector<linalg::Vector> thetas;
    for (std::size_t a = 0; a < num_arms(); ++a) {
        thetas.push_back(head_.arm(ArmId(a)).theta);
    }
    return network_.loss(feature_samples(thetas));
}

void NeuralLinUcbPolicy::train() {
    if (buffer_.empty()) {
        return;
    }
    std::vector<linalg::Vector> thetas;
    for (std::size_t a = 0; a < num_arms(); ++a) {
        thetas.push_back(head_.arm(ArmId(a)).theta);
    }
    const auto samples = feature_samples(thetas);
    std::vector<std::size_t> order(samples.size());
    std::vector<FeatureSample> batch;
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order.begin(), order.end(), train_rng_);
        for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config_.batch_size);
            batch.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(samples[order[i]]);
            }
            network_.gradient_step(batch, config_.learning_rate);
        }
    }
    rebuild_head();
    ++training_passes_;
}

void NeuralLinUcbPolicy::rebuild_head() {
    head_.reset();
    for (const auto &s : buffer_) {
        head_.update(s.arm, network_.forward(s.context), s.reward);
    }
}

nlohmann::json NeuralLinUcbPolicy::state_json() const {
    nlohmann::json buffer = nlohmann::json::array();
    for (const auto &s : buffer_) {
        buffer.push_back({{"context", s.context}, {"arm", s.arm.value()}, {"reward", s.reward}});
    }
    return {{"config",
             {{"alpha", config_.alpha},
              {"ridge", config_.ridge},
              {"hidden", config_.hidden},
              {"latent_dim", config_.latent_dim},
              {"activation", std::string(to_string(config_.activation))},
              {"learning_rate", config_.learning_rate},
              {"train_every", config_.train_every},
              {"epochs", config_.epochs},
              {"batch_size", config_.batch_size},
              {"buffer_capacity", config_.buffer_capacity}}},
            {"network", network_.to_json()},
            {"head", head_.to_json()},
            {"buffer", buffer},
            {"train_rng", train_rng_.state()},
            {"rounds", rounds_},
            {"training_passes", training_passes_}};
}

NeuralLinUcbPolicy NeuralLinUcbPolicy::from_json(const nlohmann::json &j) {
    auto head = LinUcbModel::from_json(j.at("head"));
    NeuralLinUcbPolicy p(head.num_arms());
    p.head_ = std::move(head);
    const auto &c = j.at("config");
    p.config_.alpha = c.at("alpha").get<double>();
    p.config_.ridge = c.at("ridge").get<double>();
    p.config_.hidden = c.at("hidden").get<std::vector<std::size_t>>();
    p.config_.latent_dim = c.at("latent_dim").get<std::size_t>();
    p.config_.activation = parse_activation(c.at("activation").get<std::string>());
    p.config_.learning_rate = c.at("learning_rate").get<double>();
    p.config_.train_every = c.at("train_every").get<std::size_t>();
    p.config_.epochs = c.at("epochs").get<std::size_t>();
    p.config_.batch_size = c.at("batch_size").get<std::size_t>();
    p.config_.buffer_capacity = c.at("buffer_capacity").get<std::size_t>();
    validate(p.config_);
    p.network_ = Mlp::from_json(j.at("network"));
    if (p.head_.dim() != p.network_.output_dim()) {
        throw DataError("neural_linucb snapshot: head dimension differs from network output");
    }
    for (const auto &s : j.at("buffer")) {
        p.buffer_.push_back(
            {s.at("context").get<std::vector<double>>(), ArmId(s.at("arm").get<std::size_t>()), s.at("reward").get<double>()});
    }
    p.train_rng_.restore_state(j.at("train_rng").get<std::string>());
    p.rounds_ = j.at("rounds").get<std::uint64_t>();
    p.training_passes_ = j.at("training_passes").get<std::uint64_t>();
    return p;
}

} // namespace banditmt
