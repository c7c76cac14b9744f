#include "ssann/errors.hpp"

namespace ssann {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::IrregularSampling: return "IrregularSampling";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::EmbeddingTooLarge: return "EmbeddingTooLarge";
    case ErrorKind::BadFraction: return "BadFraction";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadComponentCount: return "BadComponentCount";
    case ErrorKind::BadDimensions: return "BadDimensions";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyBatch: return "EmptyBatch";
    case ErrorKind::DivergenceDetected: return "DivergenceDetected";
    case ErrorKind::BadStep: return "BadStep";
    case ErrorKind::ScheduleInvalid: return "ScheduleInvalid";
    case ErrorKind::NonFiniteOutput: return "NonFiniteOutput";
    case ErrorKind::ZeroVarianceTargets: return "ZeroVarianceTargets";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace ssann
