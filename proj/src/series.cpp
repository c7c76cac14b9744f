#include "ssann/series.hpp"

#include "ssann/errors.hpp"
#include "ssann/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ssann {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_real(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

EmbeddingDataset::EmbeddingDataset(std::size_t dim, std::vector<double> inputs,
                                   std::vector<double> targets)
    : dim_(dim), inputs_(std::move(inputs)), targets_(std::move(targets)) {
    if (dim_ == 0 || inputs_.size() != dim_ * targets_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "embedding inputs do not match dim * count");
    }
}

EmbeddingDataset EmbeddingDataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> in;
    std::vector<double> tg;
    in.reserve(indices.size() * dim_);
    tg.reserve(indices.size());
    for (const auto i : indices) {
        const auto row = input(i);
        in.insert(in.end(), row.begin(), row.end());
        tg.push_back(targets_[i]);
    }
    return EmbeddingDataset(dim_, std::move(in), std::move(tg));
}

RawSeries load_csv(const std::filesystem::path& path, const std::string& value_column,
                   const std::string& time_column, double time_tolerance) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, "cannot open " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::ParseError, "row 1: missing header in " + path.string());
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_fields(line);
    const auto find_column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error(ErrorKind::ParseError, "row 1, column " + name + ": no such column");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t time_idx = find_column(time_column);
    const std::size_t value_idx = find_column(value_column);

    RawSeries raw;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const auto cell = [&](std::size_t idx, const std::string& name) {
            double v = 0.0;
            if (idx >= fields.size() || !parse_real(fields[idx], v)) {
                throw Error(ErrorKind::ParseError,
                            "row " + std::to_string(row) + ", column " + name + ": not a finite real");
            }
            return v;
        };
        const double t = cell(time_idx, time_column);
        const double v = cell(value_idx, value_column);
        if (!raw.timestamps.empty() && !(t > raw.timestamps.back())) {
            throw Error(ErrorKind::NonMonotonicTime,
                        "row " + std::to_string(row) + ": timestamp does not increase");
        }
        raw.timestamps.push_back(t);
        raw.values.push_back(v);
    }

    if (raw.size() < 2) {
        throw Error(ErrorKind::EmptyInput, path.string() + " has fewer than 2 data rows");
    }
    const double step = raw.timestamps[1] - raw.timestamps[0];
    for (std::size_t i = 2; i < raw.size(); ++i) {
        const double d = raw.timestamps[i] - raw.timestamps[i - 1];
        if (std::abs(d - step) > time_tolerance * std::abs(step)) {
            // data rows start at file row 2
            throw Error(ErrorKind::IrregularSampling,
                        "row " + std::to_string(i + 2) + ": sampling step differs from the first step");
        }
    }
    return raw;
}

StandardizedSeries standardize(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw Error(ErrorKind::EmptyInput, "standardize needs at least 2 samples");
    }
    double peak = 0.0;
    for (const double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "series contains NaN or Inf");
        peak = std::max(peak, std::abs(v));
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(n);
    const double floor = 1e-14 * peak;
    if (!(variance > floor * floor)) {
        throw Error(ErrorKind::ZeroVariance, "series is constant");
    }

    StandardizedSeries out;
    out.mean = mean;
    out.scale = std::sqrt(variance);
    out.values.reserve(n);
    for (const double v : values) out.values.push_back((v - mean) / out.scale);
    return out;
}

StandardizedSeries standardize(const RawSeries& raw) { return standardize(raw.values); }

std::vector<double> destandardize(std::span<const double> values, double mean, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(mean)) {
        throw Error(ErrorKind::InvalidArgument, "scale must be positive and finite");
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "cannot destandardize NaN or Inf");
        out.push_back(scale * v + mean);
    }
    return out;
}

EmbeddingDataset build_embedding(std::span<const double> series, std::size_t m) {
    const std::size_t n = series.size();
    if (m == 0) {
        throw Error(ErrorKind::InvalidArgument, "embedding dimension must be at least 1");
    }
    if (m >= n) {
        throw Error(ErrorKind::EmbeddingTooLarge, "embedding dimension " + std::to_string(m) +
                                                      " needs a series longer than " + std::to_string(n));
    }
    std::vector<double> inputs;
    std::vector<double> targets;
    inputs.reserve((n - m) * m);
    targets.reserve(n - m);
    for (std::size_t i = 0; i + m < n; ++i) {
        inputs.insert(inputs.end(), series.begin() + static_cast<std::ptrdiff_t>(i),
                      series.begin() + static_cast<std::ptrdiff_t>(i + m));
        targets.push_back(series[i + m]);
    }
    return EmbeddingDataset(m, std::move(inputs), std::move(targets));
}

SplitDataset split_validation(const EmbeddingDataset& dataset, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorKind::BadFraction, "validation fraction must lie in (0, 1)");
    }
    const std::size_t count = dataset.size();
    if (count < 2) {
        throw Error(ErrorKind::EmptyInput, "need at least 2 pairs to split");
    }
    auto n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
    n_val = std::clamp<std::size_t>(n_val, 1, count - 1);

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t i = 0; i < n_val; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(count - i));
        std::swap(order[i], order[j]);
    }

    SplitDataset split;
    split.seed = seed;
    split.fraction = fraction;
    split.validation_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(split.validation_indices.begin(), split.validation_indices.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());
    split.train = dataset.subset(split.train_indices);
    split.validation = dataset.subset(split.validation_indices);
    return split;
}

} // namespace ssann
