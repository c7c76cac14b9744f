#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssann {

enum class ErrorKind {
    InvalidArgument,
    FileNotFound,
    ParseError,
    NonMonotonicTime,
    IrregularSampling,
    NonFiniteInput,
    ZeroVariance,
    EmbeddingTooLarge,
    BadFraction,
    WindowTooLarge,
    ConvergenceFailure,
    DimensionMismatch,
    BadComponentCount,
    BadDimensions,
    LengthMismatch,
    EmptyInput,
    EmptyBatch,
    DivergenceDetected,
    BadStep,
    ScheduleInvalid,
    NonFiniteOutput,
    ZeroVarianceTargets,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct TraceRow {
    std::size_t stage = 0;
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
};

/// Thrown when training MSE stops being finite; keeps the rows recorded so far.
class TrainingDiverged : public Error {
public:
    TrainingDiverged(const std::string& message, std::vector<TraceRow> partial)
        : Error(ErrorKind::DivergenceDetected, message), partial_trace(std::move(partial)) {}

    std::vector<TraceRow> partial_trace;
};

/// Thrown when closed-loop iteration produces a non-finite value.
class ForecastDiverged : public Error {
public:
    ForecastDiverged(const std::string& message, std::vector<double> partial)
        : Error(ErrorKind::NonFiniteOutput, message), partial_predictions(std::move(partial)) {}

    std::vector<double> partial_predictions;
};

/// nrmse is undefined for constant targets; rmse is still reported.
class ZeroVarianceTargetsError : public Error {
public:
    ZeroVarianceTargetsError(const std::string& message, double rmse_value)
        : Error(ErrorKind::ZeroVarianceTargets, message), rmse(rmse_value) {}

    double rmse;
};

} // namespace ssann
