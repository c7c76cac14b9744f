#pragma once

#include "ssann/mlp.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ssann::curriculum {

/// Where a stage takes its training series from: the sum of the first
/// `components` reconstructed components, or the raw standardized series.
struct StageSource {
    enum class Kind { Partial, Raw };

    Kind kind = Kind::Raw;
    std::size_t components = 0;

    static StageSource raw() { return {Kind::Raw, 0}; }
    static StageSource partial(std::size_t p) { return {Kind::Partial, p}; }

    [[nodiscard]] bool is_raw() const noexcept { return kind == Kind::Raw; }

    friend bool operator==(const StageSource&, const StageSource&) = default;
};

struct Stage {
    StageSource source;
    mlp::TrainConfig train;
};

struct CurriculumSchedule {
    std::vector<Stage> stages;
    std::size_t pc_step = 2;

    [[nodiscard]] std::size_t epoch_budget() const noexcept;
};

/// Stages at p = 2, 2 + step, 2 + 2 step, ... capped at M, then one Raw stage.
CurriculumSchedule default_schedule(std::size_t window, std::size_t pc_step, const mlp::TrainConfig& per_stage);

/// Throws ScheduleInvalid unless: nonempty, the last stage (and only that one)
/// is Raw, and partial component counts are strictly increasing within [1, M].
void validate_schedule(const CurriculumSchedule& schedule, std::size_t window);

struct RunSettings {
    std::size_t window = 35;      // M
    std::size_t embedding = 5;    // m
    std::size_t hidden = 10;      // H
    std::uint64_t seed = 1;
    double validation_fraction = 0.10;
    /// When false, partial stage s (0-based) draws its validation split with
    /// seed + s + 1 while Raw stages use the run seed itself, so a curriculum
    /// and a baseline run with the same seed validate on the same raw pairs.
    /// When true every stage uses the run seed.
    bool shared_split = false;
};

std::uint64_t stage_split_seed(const RunSettings& settings, std::size_t stage_index, const StageSource& source);

struct StageSummary {
    StageSource source;
    std::uint64_t split_seed = 0;
    std::size_t epochs_run = 0;
    mlp::StopReason stop_reason = mlp::StopReason::EpochBudget;
    double train_mse = 0.0;       // of the state carried forward
    double validation_mse = 0.0;
};

struct CurriculumResult {
    mlp::Network initial_network;
    mlp::TrainState final_state;
    std::vector<std::vector<mlp::EpochRecord>> stage_traces;
    /// stage_boundaries[s] is the offset of stage s in the concatenated trace;
    /// the last entry is the total number of traced epochs.
    std::vector<std::size_t> stage_boundaries;
    std::vector<StageSummary> stages;
    RunSettings settings;
    CurriculumSchedule schedule;

    [[nodiscard]] std::size_t total_epochs() const noexcept { return stage_boundaries.back(); }
    [[nodiscard]] std::vector<TraceRow> concatenated_trace() const;
};

/// Decomposes once, then trains one network through every stage. Each stage
/// embeds its own source series, and the network it returns (the best
/// validation state) seeds the next stage. Throws TrainingDiverged with the
/// rows of all completed stages plus the failing one.
CurriculumResult curriculum_train(std::span<const double> series, const RunSettings& settings,
                                  const CurriculumSchedule& schedule);

struct BaselineResult {
    mlp::Network initial_network;
    mlp::TrainResult training;
};

/// One-shot training on the raw series with the same initialization and raw
/// split as curriculum_train.
BaselineResult baseline_train(std::span<const double> series, const RunSettings& settings,
                              const mlp::TrainConfig& config);

struct CurvePoint {
    std::size_t p = 0;
    double train_mse = 0.0;       // on raw training pairs
    double validation_mse = 0.0;  // on raw validation pairs
};

struct CurveResult {
    std::vector<CurvePoint> points;  // p = 2 .. M
    double baseline_train_mse = 0.0;
    double baseline_validation_mse = 0.0;
    std::size_t epochs_per_point = 0;
    std::size_t baseline_epochs = 0;
};

/// Trains one network on x~(2), x~(3), ..., x~(M) in turn (warm start) and
/// scores it on the raw pairs after every point. The baseline gets the same
/// total epoch budget.
CurveResult error_vs_pc_curve(std::span<const double> series, const RunSettings& settings,
                              const mlp::TrainConfig& per_point);

} // namespace ssann::curriculum
