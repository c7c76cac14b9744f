#pragma once

#include "ssann/errors.hpp"
#include "ssann/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssann::mlp {

enum class Activation { Tanh, Identity };

std::string_view to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view name);

// All trainable values live in one flat buffer laid out as
//   hidden_weights (H x m, row-major) | hidden_biases (H) | output_weights (H) | output_bias (1)
// Gradient and velocity buffers share the layout, so an update step is a
// single elementwise loop.
class ParameterLayout {
public:
    ParameterLayout() = default;
    ParameterLayout(std::size_t input_dim, std::size_t hidden_dim)
        : input_dim_(input_dim), hidden_dim_(hidden_dim) {}

    [[nodiscard]] std::size_t input_dim() const noexcept { return input_dim_; }
    [[nodiscard]] std::size_t hidden_dim() const noexcept { return hidden_dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return hidden_dim_ * (input_dim_ + 2) + 1; }

    [[nodiscard]] std::size_t hidden_weights_offset() const noexcept { return 0; }
    [[nodiscard]] std::size_t hidden_biases_offset() const noexcept { return hidden_dim_ * input_dim_; }
    [[nodiscard]] std::size_t output_weights_offset() const noexcept {
        return hidden_dim_ * (input_dim_ + 1);
    }
    [[nodiscard]] std::size_t output_bias_offset() const noexcept { return hidden_dim_ * (input_dim_ + 2); }

    friend bool operator==(const ParameterLayout&, const ParameterLayout&) = default;

private:
    std::size_t input_dim_ = 0;
    std::size_t hidden_dim_ = 0;
};

template <typename Derived>
class ParameterView {
public:
    friend bool operator==(const ParameterView&, const ParameterView&) = default;

    [[nodiscard]] std::span<double> hidden_weights() { return slice(layout().hidden_weights_offset(), hw()); }
    [[nodiscard]] std::span<const double> hidden_weights() const {
        return slice(layout().hidden_weights_offset(), hw());
    }
    [[nodiscard]] std::span<double> hidden_biases() { return slice(layout().hidden_biases_offset(), h()); }
    [[nodiscard]] std::span<const double> hidden_biases() const {
        return slice(layout().hidden_biases_offset(), h());
    }
    [[nodiscard]] std::span<double> output_weights() { return slice(layout().output_weights_offset(), h()); }
    [[nodiscard]] std::span<const double> output_weights() const {
        return slice(layout().output_weights_offset(), h());
    }
    [[nodiscard]] double& output_bias() { return values()[layout().output_bias_offset()]; }
    [[nodiscard]] double output_bias() const { return values()[layout().output_bias_offset()]; }

private:
    const ParameterLayout& layout() const { return static_cast<const Derived&>(*this).layout; }
    std::vector<double>& values() { return static_cast<Derived&>(*this).values; }
    const std::vector<double>& values() const { return static_cast<const Derived&>(*this).values; }
    std::size_t h() const { return layout().hidden_dim(); }
    std::size_t hw() const { return layout().hidden_dim() * layout().input_dim(); }
    std::span<double> slice(std::size_t off, std::size_t n) { return {values().data() + off, n}; }
    std::span<const double> slice(std::size_t off, std::size_t n) const {
        return {values().data() + off, n};
    }
};

/// Single hidden layer regression network: y = w2 . act(W1 x + b1) + b2.
struct Network : ParameterView<Network> {
    ParameterLayout layout;
    std::vector<double> values;
    Activation hidden_activation = Activation::Tanh;
    Activation output_activation = Activation::Identity;

    Network() = default;
    Network(std::size_t input_dim, std::size_t hidden_dim)
        : layout(input_dim, hidden_dim), values(layout.size(), 0.0) {}

    [[nodiscard]] std::size_t input_dim() const noexcept { return layout.input_dim(); }
    [[nodiscard]] std::size_t hidden_dim() const noexcept { return layout.hidden_dim(); }

    friend bool operator==(const Network&, const Network&) = default;
};

/// d(batch MSE)/d(parameter), laid out like Network::values.
struct Gradient : ParameterView<Gradient> {
    ParameterLayout layout;
    std::vector<double> values;

    Gradient() = default;
    explicit Gradient(const ParameterLayout& l) : layout(l), values(l.size(), 0.0) {}
};

struct TrainState {
    Network network;
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::vector<double> velocity;
};

struct TrainConfig {
    std::size_t epochs = 5000;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t patience = 200;
};

enum class StopReason { EpochBudget, EarlyStopping, PerfectFit };
std::string_view to_string(StopReason r) noexcept;

struct EpochRecord {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
};

struct TrainResult {
    TrainState state;  // parameters with the lowest validation MSE seen
    std::vector<EpochRecord> trace;
    StopReason stop_reason = StopReason::EpochBudget;
    std::size_t epochs_run = 0;
};

/// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero. Draw
/// order: hidden weights row-major, then output weights.
Network init_network(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

double forward(const Network& net, std::span<const double> input);

std::vector<double> predict_all(const Network& net, const EmbeddingDataset& data);

double mse(std::span<const double> predictions, std::span<const double> targets);

/// MSE of the network over a dataset.
double dataset_mse(const Network& net, const EmbeddingDataset& data);

/// Exact gradient of the batch MSE. `inputs` holds one row of input_dim values per target.
Gradient backprop_gradient(const Network& net, std::span<const double> inputs,
                           std::span<const double> targets);
inline Gradient backprop_gradient(const Network& net, const EmbeddingDataset& batch) {
    return backprop_gradient(net, batch.inputs(), batch.targets());
}

/// velocity <- momentum * velocity - lr * grad; parameters <- parameters + velocity.
TrainState gd_step(TrainState state, const Gradient& grad);

/// Full-batch gradient descent with momentum and early stopping on validation MSE.
/// Epoch e takes one step and then records both errors. The untrained network
/// counts as the epoch-0 candidate for the best state. Training ends early
/// when the training MSE is exactly zero. Velocity starts at zero.
TrainResult train(const Network& net, const SplitDataset& split, const TrainConfig& config);

} // namespace ssann::mlp
