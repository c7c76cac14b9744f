#include "ssann/forecast.hpp"

#include "ssann/errors.hpp"

#include <cmath>
#include <string>

namespace ssann::forecast {

double one_step_predict(const mlp::Network& net, std::span<const double> window) {
    return mlp::forward(net, window);
}

std::vector<double> multi_step_predict(const mlp::Network& net, std::span<const double> seed_window,
                                       std::size_t horizon) {
    if (horizon == 0) {
        throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
    }
    if (seed_window.size() != net.input_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "seed window has " + std::to_string(seed_window.size()) +
                                                      " values, network expects " +
                                                      std::to_string(net.input_dim()));
    }
    std::vector<double> window(seed_window.begin(), seed_window.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const double next = mlp::forward(net, window);
        if (!std::isfinite(next)) {
            throw ForecastDiverged("iterate " + std::to_string(h + 1) + " is not finite", std::move(out));
        }
        out.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }
    return out;
}

ForecastMetrics evaluate(std::span<const double> predictions, std::span<const double> actual) {
    const double rmse = std::sqrt(mlp::mse(predictions, actual));
    double mean = 0.0;
    for (const double a : actual) mean += a;
    mean /= static_cast<double>(actual.size());
    double var = 0.0;
    for (const double a : actual) var += (a - mean) * (a - mean);
    var /= static_cast<double>(actual.size());
    if (!(var > 0.0)) {
        throw ZeroVarianceTargetsError("actual values are constant; nrmse is undefined", rmse);
    }
    return {rmse, rmse / std::sqrt(var), actual.size()};
}

ForecastResult forecast_series(const mlp::Network& net, std::span<const double> seed_source,
                               std::size_t horizon, double mean, double scale,
                               std::span<const double> timestamps) {
    const std::size_t m = net.input_dim();
    if (horizon == 0) {
        throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
    }
    if (seed_source.size() < m) {
        throw Error(ErrorKind::EmbeddingTooLarge, "series shorter than the network input");
    }
    if (timestamps.size() < 2) {
        throw Error(ErrorKind::LengthMismatch, "need at least two timestamps to extrapolate");
    }

    ForecastResult result;
    result.horizon = horizon;
    result.seed_window.assign(seed_source.end() - static_cast<std::ptrdiff_t>(m), seed_source.end());
    result.standardized_predictions = multi_step_predict(net, result.seed_window, horizon);
    result.predictions = destandardize(result.standardized_predictions, mean, scale);

    const double first = timestamps.front();
    const double last = timestamps.back();
    const double step = (last - first) / static_cast<double>(timestamps.size() - 1);
    result.timestamps.reserve(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        result.timestamps.push_back(last + static_cast<double>(h) * step);
    }
    return result;
}

Peak find_peak(const ForecastResult& result) {
    Peak peak;
    if (result.predictions.empty()) return peak;
    for (std::size_t i = 1; i < result.predictions.size(); ++i) {
        if (result.predictions[i] > result.predictions[peak.index]) peak.index = i;
    }
    peak.value = result.predictions[peak.index];
    peak.timestamp = result.timestamps[peak.index];
    return peak;
}

} // namespace ssann::forecast
