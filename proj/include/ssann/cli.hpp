#pragma once

#include "ssann/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssann::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Flat, strictly typed run configuration (a JSON object on disk).
struct RunConfig {
    std::string input;
    std::string time_column = "time";
    std::string value_column = "value";
    double time_tolerance = 1e-9;
    std::size_t window = 35;
    std::size_t embedding = 5;
    std::size_t hidden = 10;
    std::size_t pc_step = 2;
    std::size_t epochs = 5000;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t patience = 200;
    double validation_fraction = 0.10;
    bool shared_split = false;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds{1};
    std::size_t horizon = 72;
    std::size_t holdout = 0;
    std::size_t baseline_epochs = 0;  // 0: match the curriculum budget
    std::size_t forecast_seed_components = 0;  // 0: seed from the raw tail
    bool curve = true;
    std::string output_dir = "out";

    /// Directory of the config file; relative input paths resolve against it.
    std::filesystem::path base_dir;
    std::vector<std::string> overrides;

    [[nodiscard]] std::filesystem::path input_path() const;
    /// Every key except output_dir, plus the overrides applied (output_dir ones left out).
    [[nodiscard]] nlohmann::json echo() const;
};

/// Parses the config file and applies `key=value` overrides (values are
/// JSON literals; anything that is not valid JSON is taken as a string).
/// Unknown keys and wrongly typed values raise ConfigError.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// 2 for configuration and input validation failures, 1 for runtime and
/// numerical failures.
int exit_code_for(ErrorKind kind) noexcept;

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ssann::cli
