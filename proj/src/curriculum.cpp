#include "ssann/curriculum.hpp"

#include "ssann/errors.hpp"
#include "ssann/ssa.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace ssann::curriculum {

std::size_t CurriculumSchedule::epoch_budget() const noexcept {
    std::size_t total = 0;
    for (const auto& s : stages) total += s.train.epochs;
    return total;
}

CurriculumSchedule default_schedule(std::size_t window, std::size_t pc_step,
                                    const mlp::TrainConfig& per_stage) {
    if (window < 2) {
        throw Error(ErrorKind::BadStep, "curriculum needs a window of at least 2");
    }
    // steps past M are allowed and simply jump straight to the cap
    if (pc_step < 1) {
        throw Error(ErrorKind::BadStep, "pc_step must be at least 1");
    }
    CurriculumSchedule schedule;
    schedule.pc_step = pc_step;
    std::size_t p = 2;
    while (true) {
        schedule.stages.push_back({StageSource::partial(p), per_stage});
        if (p == window) break;
        p = std::min(p + pc_step, window);
    }
    schedule.stages.push_back({StageSource::raw(), per_stage});
    return schedule;
}

void validate_schedule(const CurriculumSchedule& schedule, std::size_t window) {
    const auto& stages = schedule.stages;
    if (stages.empty()) {
        throw Error(ErrorKind::ScheduleInvalid, "schedule has no stages");
    }
    if (!stages.back().source.is_raw()) {
        throw Error(ErrorKind::ScheduleInvalid, "final stage must train on the raw series");
    }
    std::size_t previous = 0;
    for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
        const auto& src = stages[s].source;
        if (src.is_raw()) {
            throw Error(ErrorKind::ScheduleInvalid, "only the final stage may be Raw");
        }
        if (src.components <= previous || src.components > window) {
            throw Error(ErrorKind::ScheduleInvalid,
                        "stage " + std::to_string(s) + ": component counts must increase within [1, M]");
        }
        previous = src.components;
    }
}

std::uint64_t stage_split_seed(const RunSettings& settings, std::size_t stage_index, const StageSource& source) {
    if (settings.shared_split || source.is_raw()) return settings.seed;
    return settings.seed + stage_index + 1;
}

std::vector<TraceRow> CurriculumResult::concatenated_trace() const {
    std::vector<TraceRow> rows;
    rows.reserve(total_epochs());
    for (std::size_t s = 0; s < stage_traces.size(); ++s) {
        for (const auto& r : stage_traces[s]) rows.push_back({s, r.epoch, r.train_mse, r.validation_mse});
    }
    return rows;
}

namespace {

void check_settings(std::span<const double> series, const RunSettings& settings) {
    if (settings.embedding == 0 || settings.hidden == 0) {
        throw Error(ErrorKind::BadDimensions, "embedding and hidden sizes must be positive");
    }
    if (settings.embedding >= series.size()) {
        throw Error(ErrorKind::EmbeddingTooLarge, "embedding dimension " + std::to_string(settings.embedding) +
                                                      " needs a series longer than " +
                                                      std::to_string(series.size()));
    }
}

} // namespace

CurriculumResult curriculum_train(std::span<const double> series, const RunSettings& settings,
                                  const CurriculumSchedule& schedule) {
    check_settings(series, settings);
    validate_schedule(schedule, settings.window);

    std::optional<ssa::Decomposition> decomposition;
    if (!schedule.stages.front().source.is_raw()) {
        decomposition = ssa::decompose(series, settings.window);
    }

    CurriculumResult result;
    result.settings = settings;
    result.schedule = schedule;
    result.initial_network = mlp::init_network(settings.embedding, settings.hidden, settings.seed);
    result.stage_boundaries.push_back(0);

    mlp::Network network = result.initial_network;
    mlp::TrainState last;
    for (std::size_t s = 0; s < schedule.stages.size(); ++s) {
        const auto& stage = schedule.stages[s];
        const std::vector<double> source =
            stage.source.is_raw()
                ? std::vector<double>(series.begin(), series.end())
                : ssa::partial_reconstruction(decomposition->components, stage.source.components);
        const std::uint64_t split_seed = stage_split_seed(settings, s, stage.source);
        const auto split = split_validation(build_embedding(source, settings.embedding),
                                            settings.validation_fraction, split_seed);

        mlp::TrainResult trained;
        try {
            trained = mlp::train(network, split, stage.train);
        } catch (const TrainingDiverged& e) {
            auto rows = result.concatenated_trace();
            for (auto row : e.partial_trace) {
                row.stage = s;
                rows.push_back(row);
            }
            throw TrainingDiverged("stage " + std::to_string(s) + ": " + e.what(), std::move(rows));
        }

        result.stages.push_back({stage.source, split_seed, trained.epochs_run, trained.stop_reason,
                                 trained.state.train_mse, trained.state.validation_mse});
        result.stage_boundaries.push_back(result.stage_boundaries.back() + trained.trace.size());
        result.stage_traces.push_back(std::move(trained.trace));
        network = trained.state.network;
        last = std::move(trained.state);
    }
    result.final_state = std::move(last);
    return result;
}

BaselineResult baseline_train(std::span<const double> series, const RunSettings& settings,
                              const mlp::TrainConfig& config) {
    check_settings(series, settings);
    BaselineResult result;
    result.initial_network = mlp::init_network(settings.embedding, settings.hidden, settings.seed);
    const auto split = split_validation(build_embedding(series, settings.embedding),
                                        settings.validation_fraction,
                                        stage_split_seed(settings, 0, StageSource::raw()));
    result.training = mlp::train(result.initial_network, split, config);
    return result;
}

CurveResult error_vs_pc_curve(std::span<const double> series, const RunSettings& settings,
                              const mlp::TrainConfig& per_point) {
    check_settings(series, settings);
    if (settings.window < 2) {
        throw Error(ErrorKind::BadStep, "curve needs a window of at least 2");
    }
    const auto decomposition = ssa::decompose(series, settings.window);
    const auto raw_split = split_validation(build_embedding(series, settings.embedding),
                                            settings.validation_fraction, settings.seed);

    CurveResult curve;
    curve.epochs_per_point = per_point.epochs;
    mlp::Network network = mlp::init_network(settings.embedding, settings.hidden, settings.seed);
    for (std::size_t p = 2; p <= settings.window; ++p) {
        const auto source = ssa::partial_reconstruction(decomposition.components, p);
        const auto split = split_validation(build_embedding(source, settings.embedding),
                                            settings.validation_fraction,
                                            stage_split_seed(settings, p - 2, StageSource::partial(p)));
        network = mlp::train(network, split, per_point).state.network;
        curve.points.push_back(
            {p, mlp::dataset_mse(network, raw_split.train), mlp::dataset_mse(network, raw_split.validation)});
    }

    mlp::TrainConfig baseline_config = per_point;
    baseline_config.epochs = per_point.epochs * (settings.window - 1);
    curve.baseline_epochs = baseline_config.epochs;
    const auto baseline = baseline_train(series, settings, baseline_config);
    curve.baseline_train_mse = baseline.training.state.train_mse;
    curve.baseline_validation_mse = baseline.training.state.validation_mse;
    return curve;
}

} // namespace ssann::curriculum
