#include "ssann/mlp.hpp"

#include "ssann/rng.hpp"

#include <cmath>
#include <string>

namespace ssann::mlp {

std::string_view to_string(Activation a) noexcept {
    switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
    }
    return "unknown";
}

Activation activation_from_string(std::string_view name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw Error(ErrorKind::InvalidArgument, "unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
    case StopReason::EpochBudget: return "epoch_budget";
    case StopReason::EarlyStopping: return "early_stopping";
    case StopReason::PerfectFit: return "perfect_fit";
    }
    return "unknown";
}

namespace {

double activate(Activation a, double z) { return a == Activation::Tanh ? std::tanh(z) : z; }

// derivative expressed through the activation value
double activate_slope(Activation a, double value) {
    return a == Activation::Tanh ? 1.0 - value * value : 1.0;
}

void check_input(const Network& net, std::size_t length) {
    if (length != net.input_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "input has " + std::to_string(length) +
                                                      " values, network expects " +
                                                      std::to_string(net.input_dim()));
    }
}

// Forward pass that also keeps the hidden activations.
double forward_into(const Network& net, std::span<const double> x, std::span<double> hidden) {
    const std::size_t m = net.input_dim();
    const auto w1 = net.hidden_weights();
    const auto b1 = net.hidden_biases();
    const auto w2 = net.output_weights();
    double y = net.output_bias();
    for (std::size_t h = 0; h < net.hidden_dim(); ++h) {
        double z = b1[h];
        const double* row = w1.data() + h * m;
        for (std::size_t j = 0; j < m; ++j) z += row[j] * x[j];
        hidden[h] = activate(net.hidden_activation, z);
        y += w2[h] * hidden[h];
    }
    return y;
}

} // namespace

Network init_network(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) {
    if (input_dim == 0 || hidden_dim == 0) {
        throw Error(ErrorKind::BadDimensions, "network needs at least one input and one hidden unit");
    }
    Network net(input_dim, hidden_dim);
    Rng rng(seed);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (double& w : net.hidden_weights()) w = rng.uniform(-r1, r1);
    const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    for (double& w : net.output_weights()) w = rng.uniform(-r2, r2);
    return net;
}

double forward(const Network& net, std::span<const double> input) {
    check_input(net, input.size());
    for (const double v : input) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "network input is not finite");
    }
    std::vector<double> hidden(net.hidden_dim());
    return forward_into(net, input, hidden);
}

std::vector<double> predict_all(const Network& net, const EmbeddingDataset& data) {
    check_input(net, data.dim());
    std::vector<double> hidden(net.hidden_dim());
    std::vector<double> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out.push_back(forward_into(net, data.input(i), hidden));
    return out;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                                   std::to_string(targets.size()) + " targets");
    }
    if (predictions.empty()) {
        throw Error(ErrorKind::EmptyInput, "mse of an empty sequence");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double e = predictions[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(targets.size());
}

double dataset_mse(const Network& net, const EmbeddingDataset& data) {
    return mse(predict_all(net, data), data.targets());
}

Gradient backprop_gradient(const Network& net, std::span<const double> inputs,
                           std::span<const double> targets) {
    const std::size_t m = net.input_dim();
    const std::size_t hdim = net.hidden_dim();
    if (targets.empty()) {
        throw Error(ErrorKind::EmptyBatch, "gradient of an empty batch");
    }
    if (inputs.size() != targets.size() * m) {
        throw Error(ErrorKind::DimensionMismatch, "batch inputs do not match input_dim * batch size");
    }

    Gradient g(net.layout);
    auto gw1 = g.hidden_weights();
    auto gb1 = g.hidden_biases();
    auto gw2 = g.output_weights();
    const auto w2 = net.output_weights();
    const double scale = 2.0 / static_cast<double>(targets.size());

    std::vector<double> hidden(hdim);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto x = inputs.subspan(i * m, m);
        const double y = forward_into(net, x, hidden);
        const double d = scale * (y - targets[i]);
        g.output_bias() += d;
        for (std::size_t h = 0; h < hdim; ++h) {
            gw2[h] += d * hidden[h];
            const double delta = d * w2[h] * activate_slope(net.hidden_activation, hidden[h]);
            gb1[h] += delta;
            double* row = gw1.data() + h * m;
            for (std::size_t j = 0; j < m; ++j) row[j] += delta * x[j];
        }
    }
    return g;
}

TrainState gd_step(TrainState state, const Gradient& grad) {
    auto& params = state.network.values;
    if (!(grad.layout == state.network.layout) || grad.values.size() != params.size()) {
        throw Error(ErrorKind::DimensionMismatch, "gradient shape differs from the network");
    }
    if (state.velocity.empty()) state.velocity.assign(params.size(), 0.0);
    if (state.velocity.size() != params.size()) {
        throw Error(ErrorKind::DimensionMismatch, "velocity shape differs from the network");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.velocity[i] = state.momentum * state.velocity[i] - state.learning_rate * grad.values[i];
        params[i] += state.velocity[i];
    }
    return state;
}

TrainResult train(const Network& net, const SplitDataset& split, const TrainConfig& config) {
    if (config.epochs == 0) {
        throw Error(ErrorKind::InvalidArgument, "epochs must be at least 1");
    }
    if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
        throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
    }
    if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "momentum must lie in [0, 1)");
    }
    if (split.train.empty() || split.validation.empty()) {
        throw Error(ErrorKind::EmptyBatch, "training and validation sets must be nonempty");
    }
    if (split.train.dim() != net.input_dim() || split.validation.dim() != net.input_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "dataset dimension differs from network input_dim");
    }

    TrainState current;
    current.network = net;
    current.learning_rate = config.learning_rate;
    current.momentum = config.momentum;
    current.velocity.assign(net.values.size(), 0.0);
    current.train_mse = dataset_mse(net, split.train);
    current.validation_mse = dataset_mse(net, split.validation);

    TrainResult result;
    result.state = current;

    std::size_t since_best = 0;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const Gradient grad = backprop_gradient(current.network, split.train);
        current = gd_step(std::move(current), grad);
        current.epoch = epoch;
        current.train_mse = dataset_mse(current.network, split.train);
        current.validation_mse = dataset_mse(current.network, split.validation);
        result.epochs_run = epoch;

        if (!std::isfinite(current.train_mse) || !std::isfinite(current.validation_mse)) {
            std::vector<TraceRow> partial;
            partial.reserve(result.trace.size() + 1);
            for (const auto& r : result.trace) partial.push_back({0, r.epoch, r.train_mse, r.validation_mse});
            partial.push_back({0, epoch, current.train_mse, current.validation_mse});
            throw TrainingDiverged("training MSE became non-finite at epoch " + std::to_string(epoch),
                                   std::move(partial));
        }
        result.trace.push_back({epoch, current.train_mse, current.validation_mse});

        if (current.validation_mse < result.state.validation_mse) {
            result.state = current;
            since_best = 0;
        } else {
            ++since_best;
        }
        if (current.train_mse == 0.0) {
            result.stop_reason = StopReason::PerfectFit;
            break;
        }
        if (config.patience > 0 && since_best >= config.patience) {
            result.stop_reason = StopReason::EarlyStopping;
            break;
        }
    }
    return result;
}

} // namespace ssann::mlp
