#pragma once

#include "ssann/mlp.hpp"
#include "ssann/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ssann::forecast {

struct ForecastResult {
    std::size_t horizon = 0;
    std::vector<double> predictions;               // original units
    std::vector<double> standardized_predictions;
    std::vector<double> seed_window;               // standardized
    std::vector<double> timestamps;
};

struct ForecastMetrics {
    double rmse = 0.0;
    double nrmse = 0.0;
    std::size_t horizon = 0;
};

struct Peak {
    std::size_t index = 0;
    double value = 0.0;
    double timestamp = 0.0;
};

double one_step_predict(const mlp::Network& net, std::span<const double> window);

/// Closed-loop iteration: each output is appended to the window, the oldest
/// value is dropped, and the window is fed back. Throws ForecastDiverged with
/// the finite outputs produced so far if an iterate is not finite.
std::vector<double> multi_step_predict(const mlp::Network& net, std::span<const double> seed_window,
                                       std::size_t horizon);

/// rmse and rmse / population std of `actual`. Throws ZeroVarianceTargetsError
/// (carrying rmse) when `actual` is constant.
ForecastMetrics evaluate(std::span<const double> predictions, std::span<const double> actual);

/// Seeds from the last m values of `seed_source` (normally the standardized
/// series), iterates, destandardizes, and continues the timestamps at the
/// mean source spacing.
ForecastResult forecast_series(const mlp::Network& net, std::span<const double> seed_source,
                               std::size_t horizon, double mean, double scale,
                               std::span<const double> timestamps);

Peak find_peak(const ForecastResult& result);

} // namespace ssann::forecast
