#pragma once

#include "ssann/errors.hpp"
#include "ssann/mlp.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ssann::io {

inline constexpr int kNetworkFormatVersion = 1;

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Network document:
//   {"format_version": 1, "input_dim": m, "hidden_dim": H,
//    "hidden_activation": "tanh", "output_activation": "identity",
//    "hidden_weights": [[... m ...] x H], "hidden_biases": [... H ...],
//    "output_weights": [[... H ...]], "output_bias": b}
nlohmann::json network_to_json(const mlp::Network& net);
mlp::Network network_from_json(const nlohmann::json& doc);

/// Header `stage,epoch,train_mse,validation_mse`.
std::string trace_csv(std::span<const TraceRow> rows);

/// Plain JSON array of reals.
nlohmann::json real_array(std::span<const double> values);

} // namespace ssann::io
