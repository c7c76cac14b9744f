#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ssann {

inline constexpr double kDefaultTimeTolerance = 1e-9;

/// Uniformly sampled observations in original units.
struct RawSeries {
    std::vector<double> timestamps;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Zero-mean, unit population variance series plus the scaling needed to undo it.
struct StandardizedSeries {
    std::vector<double> values;
    double mean = 0.0;
    double scale = 1.0;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Supervised pairs (window of m samples -> next sample). Windows are stored
/// row-major in `inputs`, one row of `dim` values per pair.
class EmbeddingDataset {
public:
    EmbeddingDataset() = default;
    EmbeddingDataset(std::size_t dim, std::vector<double> inputs, std::vector<double> targets);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return targets_.size(); }
    [[nodiscard]] bool empty() const noexcept { return targets_.empty(); }

    [[nodiscard]] std::span<const double> input(std::size_t i) const {
        return {inputs_.data() + i * dim_, dim_};
    }
    [[nodiscard]] double target(std::size_t i) const { return targets_[i]; }

    [[nodiscard]] const std::vector<double>& inputs() const noexcept { return inputs_; }
    [[nodiscard]] const std::vector<double>& targets() const noexcept { return targets_; }

    /// Pairs at the given indices, in the given order.
    [[nodiscard]] EmbeddingDataset subset(std::span<const std::size_t> indices) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> inputs_;
    std::vector<double> targets_;
};

struct SplitDataset {
    EmbeddingDataset train;
    EmbeddingDataset validation;
    std::vector<std::size_t> train_indices;       // ascending
    std::vector<std::size_t> validation_indices;  // ascending
    std::uint64_t seed = 0;
    double fraction = 0.0;
};

/// Reads a header-first, comma-delimited file. Columns are picked by name.
/// Timestamps must be strictly increasing with steps equal to the first step
/// within `time_tolerance` relative.
RawSeries load_csv(const std::filesystem::path& path, const std::string& value_column,
                   const std::string& time_column, double time_tolerance = kDefaultTimeTolerance);

StandardizedSeries standardize(const RawSeries& raw);
StandardizedSeries standardize(std::span<const double> values);

std::vector<double> destandardize(std::span<const double> values, double mean, double scale);

EmbeddingDataset build_embedding(std::span<const double> series, std::size_t m);
inline EmbeddingDataset build_embedding(const StandardizedSeries& series, std::size_t m) {
    return build_embedding(std::span<const double>(series.values), m);
}

/// Validation size is round(fraction * count), at least 1 and at most count - 1.
/// Indices come from a partial Fisher-Yates shuffle driven by Rng(seed).
SplitDataset split_validation(const EmbeddingDataset& dataset, double fraction, std::uint64_t seed);

} // namespace ssann
