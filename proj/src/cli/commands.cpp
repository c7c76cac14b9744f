#include "ssann/cli.hpp"

#include "ssann/curriculum.hpp"
#include "ssann/forecast.hpp"
#include "ssann/io.hpp"
#include "ssann/series.hpp"
#include "ssann/ssa.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>

namespace ssann::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string command;
    std::string mode = "curriculum";
    std::string network;
};

// Series after validation: the leading part used for fitting plus the
// held-out tail (possibly empty) used to score forecasts.
struct Prepared {
    std::vector<double> timestamps;
    StandardizedSeries series;
    std::vector<double> holdout_values;
};

Prepared prepare(const RunConfig& cfg, std::ostream& err) {
    RawSeries raw = load_csv(cfg.input_path(), cfg.value_column, cfg.time_column, cfg.time_tolerance);
    if (cfg.holdout + 2 > raw.size()) {
        throw Error(ErrorKind::LengthMismatch, "holdout leaves fewer than 2 samples for fitting");
    }
    const std::size_t n = raw.size() - cfg.holdout;
    if (2 * cfg.window > n) {
        throw Error(ErrorKind::WindowTooLarge, "window " + std::to_string(cfg.window) +
                                                   " exceeds half the fitted length " + std::to_string(n));
    }
    if (cfg.embedding + 2 > n) {
        throw Error(ErrorKind::EmbeddingTooLarge, "embedding " + std::to_string(cfg.embedding) +
                                                      " leaves fewer than 2 pairs from " + std::to_string(n) +
                                                      " samples");
    }
    if (ssa::window_exceeds_recommended(n, cfg.window)) {
        err << "warning: window " << cfg.window << " exceeds N/3 for N = " << n << '\n';
    }

    Prepared p;
    p.timestamps.assign(raw.timestamps.begin(), raw.timestamps.begin() + static_cast<std::ptrdiff_t>(n));
    p.series = standardize(std::span<const double>(raw.values).first(n));
    p.holdout_values.assign(raw.values.begin() + static_cast<std::ptrdiff_t>(n), raw.values.end());
    return p;
}

curriculum::RunSettings settings_from(const RunConfig& cfg, std::uint64_t seed) {
    return {cfg.window, cfg.embedding, cfg.hidden, seed, cfg.validation_fraction, cfg.shared_split};
}

mlp::TrainConfig train_config_from(const RunConfig& cfg) {
    return {cfg.epochs, cfg.learning_rate, cfg.momentum, cfg.patience};
}

curriculum::CurriculumSchedule schedule_from(const RunConfig& cfg) {
    return curriculum::default_schedule(cfg.window, cfg.pc_step, train_config_from(cfg));
}

mlp::TrainConfig baseline_config_from(const RunConfig& cfg) {
    auto tc = train_config_from(cfg);
    tc.epochs = cfg.baseline_epochs > 0 ? cfg.baseline_epochs : schedule_from(cfg).epoch_budget();
    return tc;
}

json source_json(const curriculum::StageSource& src) {
    if (src.is_raw()) return {{"source", "raw"}};
    return {{"source", "partial"}, {"components", src.components}};
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

fs::path output_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto prepared = prepare(cfg, err);
    const auto& x = prepared.series.values;
    const auto d = ssa::decompose(x, cfg.window);
    const double completeness = ssa::completeness_error(d.components, x);
    const auto dir = output_dir(cfg);

    json eigenvectors = json::array();
    for (const auto& e : d.spectrum.eigenvectors) eigenvectors.push_back(io::real_array(e));
    const json spectrum = {
        {"M", cfg.window},
        {"N", x.size()},
        {"lags", io::real_array(d.correlation.lags)},
        {"eigenvalues", io::real_array(d.spectrum.eigenvalues)},
        {"eigenvectors", eigenvectors},
        {"eigensolver", std::string(ssa::to_string(d.spectrum.solver))},
        {"eigensolver_iterations", d.spectrum.iterations},
        {"completeness_error", completeness},
        {"standardization", {{"mean", prepared.series.mean}, {"scale", prepared.series.scale}}},
        {"config_echo", cfg.echo()},
    };
    io::write_atomic(dir / "spectrum.json", dump(spectrum));

    std::string csv = "timestamp,series";
    for (std::size_t k = 1; k <= cfg.window; ++k) csv += ",rc" + std::to_string(k);
    csv += '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        csv += io::format_real(prepared.timestamps[i]) + ',' + io::format_real(x[i]);
        for (const auto& rc : d.components.rcs) csv += ',' + io::format_real(rc[i]);
        csv += '\n';
    }
    io::write_atomic(dir / "components.csv", csv);

    std::string plot = "k,log10_lambda,clamped\n";
    for (const auto& pt : ssa::singular_spectrum_plot_data(d.spectrum)) {
        plot += std::to_string(pt.k) + ',' + io::format_real(pt.log10_lambda) + ',' + (pt.clamped ? "1" : "0") + '\n';
    }
    io::write_atomic(dir / "singular_spectrum.csv", plot);

    out << "decompose: N=" << x.size() << " M=" << cfg.window
        << " completeness_error=" << io::format_real(completeness) << '\n';
    return kExitOk;
}

void write_divergence(const fs::path& dir, const TrainingDiverged& e, const json& extra) {
    io::write_atomic(dir / "trace.csv", io::trace_csv(e.partial_trace));
    json summary = extra;
    summary["status"] = "diverged";
    summary["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    io::write_atomic(dir / "summary.json", dump(summary));
}

int cmd_train(const RunConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.mode != "curriculum" && opt.mode != "baseline") {
        throw Error(ErrorKind::ConfigError, "mode must be curriculum or baseline");
    }
    const auto prepared = prepare(cfg, err);
    const auto& x = prepared.series.values;
    const auto settings = settings_from(cfg, cfg.seed);
    const auto dir = output_dir(cfg);

    json summary = {
        {"mode", opt.mode},
        {"standardization", {{"mean", prepared.series.mean}, {"scale", prepared.series.scale}}},
        {"config_echo", cfg.echo()},
    };

    try {
        if (opt.mode == "curriculum") {
            const auto schedule = schedule_from(cfg);
            const auto result = curriculum::curriculum_train(x, settings, schedule);
            json stages = json::array();
            for (const auto& s : result.stages) {
                json entry = source_json(s.source);
                entry["split_seed"] = s.split_seed;
                entry["epochs_run"] = s.epochs_run;
                entry["stop_reason"] = std::string(mlp::to_string(s.stop_reason));
                entry["train_mse"] = s.train_mse;
                entry["validation_mse"] = s.validation_mse;
                stages.push_back(entry);
            }
            summary["status"] = "ok";
            summary["final_train_mse"] = result.final_state.train_mse;
            summary["final_validation_mse"] = result.final_state.validation_mse;
            summary["stage_boundaries"] = result.stage_boundaries;
            summary["stages"] = stages;
            summary["total_epochs"] = result.total_epochs();
            summary["epoch_budget"] = schedule.epoch_budget();
            summary["initial_network"] = io::network_to_json(result.initial_network);
            io::write_atomic(dir / "trace.csv", io::trace_csv(result.concatenated_trace()));
            io::write_atomic(dir / "network.json", dump(io::network_to_json(result.final_state.network)));
        } else {
            const auto config = baseline_config_from(cfg);
            const auto result = curriculum::baseline_train(x, settings, config);
            std::vector<TraceRow> rows;
            for (const auto& r : result.training.trace) rows.push_back({0, r.epoch, r.train_mse, r.validation_mse});
            const auto& st = result.training.state;
            summary["status"] = "ok";
            summary["final_train_mse"] = st.train_mse;
            summary["final_validation_mse"] = st.validation_mse;
            summary["stage_boundaries"] = std::vector<std::size_t>{0, rows.size()};
            summary["stages"] = json::array({source_json(curriculum::StageSource::raw())});
            summary["stages"][0]["split_seed"] = curriculum::stage_split_seed(settings, 0, curriculum::StageSource::raw());
            summary["stages"][0]["epochs_run"] = result.training.epochs_run;
            summary["stages"][0]["stop_reason"] = std::string(mlp::to_string(result.training.stop_reason));
            summary["stages"][0]["train_mse"] = st.train_mse;
            summary["stages"][0]["validation_mse"] = st.validation_mse;
            summary["total_epochs"] = rows.size();
            summary["epoch_budget"] = config.epochs;
            summary["initial_network"] = io::network_to_json(result.initial_network);
            io::write_atomic(dir / "trace.csv", io::trace_csv(rows));
            io::write_atomic(dir / "network.json", dump(io::network_to_json(st.network)));
        }
    } catch (const TrainingDiverged& e) {
        write_divergence(dir, e, summary);
        throw;
    }

    io::write_atomic(dir / "summary.json", dump(summary));
    out << "train (" << opt.mode << "): final_train_mse=" << io::format_real(summary["final_train_mse"].get<double>())
        << " final_validation_mse=" << io::format_real(summary["final_validation_mse"].get<double>())
        << " epochs=" << summary["total_epochs"].get<std::size_t>() << '\n';
    return kExitOk;
}

std::vector<double> seed_source(const RunConfig& cfg, const Prepared& prepared) {
    if (cfg.forecast_seed_components == 0) return prepared.series.values;
    const auto d = ssa::decompose(prepared.series.values, cfg.window);
    return ssa::partial_reconstruction(d.components, cfg.forecast_seed_components);
}

int cmd_predict(const RunConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
    const auto prepared = prepare(cfg, err);
    const fs::path network_path = opt.network.empty() ? fs::path(cfg.output_dir) / "network.json" : fs::path(opt.network);
    json net_doc;
    try {
        net_doc = json::parse(io::read_file(network_path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, network_path.string() + ": " + e.what());
    }
    const auto net = io::network_from_json(net_doc);
    if (net.input_dim() != cfg.embedding) {
        throw Error(ErrorKind::DimensionMismatch, "network input_dim " + std::to_string(net.input_dim()) +
                                                      " differs from embedding " + std::to_string(cfg.embedding));
    }
    if (cfg.holdout > 0 && cfg.holdout != cfg.horizon) {
        throw Error(ErrorKind::LengthMismatch, "horizon " + std::to_string(cfg.horizon) +
                                                   " must equal holdout " + std::to_string(cfg.holdout) +
                                                   " to score the forecast");
    }
    const auto dir = output_dir(cfg);
    const auto source = seed_source(cfg, prepared);

    json doc = {{"config_echo", cfg.echo()}, {"network", network_path.filename().string()}};
    forecast::ForecastResult result;
    try {
        result = forecast::forecast_series(net, source, cfg.horizon, prepared.series.mean, prepared.series.scale,
                                           prepared.timestamps);
    } catch (const ForecastDiverged& e) {
        doc["status"] = "diverged";
        doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        doc["partial_standardized_predictions"] = io::real_array(e.partial_predictions);
        io::write_atomic(dir / "forecast.json", dump(doc));
        throw;
    }

    const auto peak = forecast::find_peak(result);
    doc["status"] = "ok";
    doc["horizon"] = result.horizon;
    doc["timestamps"] = io::real_array(result.timestamps);
    doc["predictions"] = io::real_array(result.predictions);
    doc["standardized_predictions"] = io::real_array(result.standardized_predictions);
    doc["seed_window"] = io::real_array(result.seed_window);
    doc["peak"] = {{"index", peak.index}, {"value", peak.value}, {"timestamp", peak.timestamp}};
    if (cfg.holdout > 0) {
        try {
            const auto metrics = forecast::evaluate(result.predictions, prepared.holdout_values);
            doc["metrics"] = {{"rmse", metrics.rmse}, {"nrmse", metrics.nrmse}, {"horizon", metrics.horizon}};
        } catch (const ZeroVarianceTargetsError& e) {
            doc["metrics"] = {{"rmse", e.rmse}, {"nrmse", nullptr}, {"horizon", cfg.holdout}};
        }
    }

    std::string csv = "timestamp,prediction\n";
    for (std::size_t i = 0; i < result.horizon; ++i) {
        csv += io::format_real(result.timestamps[i]) + ',' + io::format_real(result.predictions[i]) + '\n';
    }
    io::write_atomic(dir / "forecast.csv", csv);
    io::write_atomic(dir / "forecast.json", dump(doc));
    out << "predict: horizon=" << result.horizon << " peak=" << io::format_real(peak.value) << " at "
        << io::format_real(peak.timestamp) << '\n';
    return kExitOk;
}

double median(std::vector<double> v) {
    for (double& x : v) {
        if (!std::isfinite(x)) x = std::numeric_limits<double>::infinity();
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Closed-loop forecast over the holdout, scored in original units; NaN when it diverges.
double holdout_rmse(const mlp::Network& net, const Prepared& prepared) {
    try {
        const auto f = forecast::forecast_series(net, prepared.series.values, prepared.holdout_values.size(),
                                                 prepared.series.mean, prepared.series.scale, prepared.timestamps);
        return std::sqrt(mlp::mse(f.predictions, prepared.holdout_values));
    } catch (const ForecastDiverged&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto prepared = prepare(cfg, err);
    const auto& x = prepared.series.values;
    const auto dir = output_dir(cfg);
    const auto schedule = schedule_from(cfg);
    const auto baseline_config = baseline_config_from(cfg);
    const bool score_forecasts = cfg.holdout > 0;

    if (cfg.curve) {
        const auto curve = curriculum::error_vs_pc_curve(x, settings_from(cfg, cfg.seeds.front()), train_config_from(cfg));
        std::string csv = "p,train_mse,validation_mse,baseline_mse\n";
        for (const auto& pt : curve.points) {
            csv += std::to_string(pt.p) + ',' + io::format_real(pt.train_mse) + ',' +
                   io::format_real(pt.validation_mse) + ',' + io::format_real(curve.baseline_validation_mse) + '\n';
        }
        io::write_atomic(dir / "curve.csv", csv);
    }

    json runs = json::array();
    std::vector<double> cur_val, base_val, cur_rmse, base_rmse;
    json doc = {
        {"config_echo", cfg.echo()},
        {"epoch_budget", {{"curriculum", schedule.epoch_budget()}, {"baseline", baseline_config.epochs}}},
        {"holdout", cfg.holdout},
    };
    const auto write_doc = [&](bool complete) {
        doc["status"] = complete ? "ok" : "partial";
        doc["runs"] = runs;
        doc["median"] = {
            {"curriculum_validation_mse", median(cur_val)},
            {"baseline_validation_mse", median(base_val)},
        };
        if (score_forecasts) {
            doc["median"]["curriculum_forecast_rmse"] = nullable(median(cur_rmse));
            doc["median"]["baseline_forecast_rmse"] = nullable(median(base_rmse));
        }
        io::write_atomic(dir / "comparison.json", dump(doc));
    };

    for (const auto seed : cfg.seeds) {
        const auto settings = settings_from(cfg, seed);
        const auto cur = curriculum::curriculum_train(x, settings, schedule);
        const auto base = curriculum::baseline_train(x, settings, baseline_config);
        json run = {
            {"seed", seed},
            {"curriculum", {{"validation_mse", cur.final_state.validation_mse},
                            {"train_mse", cur.final_state.train_mse},
                            {"epochs_consumed", cur.total_epochs()}}},
            {"baseline", {{"validation_mse", base.training.state.validation_mse},
                          {"train_mse", base.training.state.train_mse},
                          {"epochs_consumed", base.training.epochs_run}}},
        };
        cur_val.push_back(cur.final_state.validation_mse);
        base_val.push_back(base.training.state.validation_mse);
        if (score_forecasts) {
            const double rc = holdout_rmse(cur.final_state.network, prepared);
            const double rb = holdout_rmse(base.training.state.network, prepared);
            run["curriculum"]["forecast_rmse"] = nullable(rc);
            run["baseline"]["forecast_rmse"] = nullable(rb);
            cur_rmse.push_back(rc);
            base_rmse.push_back(rb);
        }
        runs.push_back(run);
        write_doc(false);
        out << "compare: seed " << seed << " curriculum_val=" << io::format_real(cur.final_state.validation_mse)
            << " baseline_val=" << io::format_real(base.training.state.validation_mse) << '\n';
    }
    write_doc(true);
    return kExitOk;
}

void report(std::ostream& err, ErrorKind kind, const std::string& message) {
    const json line = {{"error", std::string(to_string(kind))}, {"message", message}};
    err << line.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SSA-filtered curriculum training and forecasting for univariate series", "ssann"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    Options opt;
    std::optional<std::size_t> horizon;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--set", overrides, "override a config key: key=value")->take_all();
    };
    auto* decompose = app.add_subcommand("decompose", "SSA decomposition and singular spectrum");
    auto* train = app.add_subcommand("train", "train a network (curriculum or baseline)");
    auto* predict = app.add_subcommand("predict", "closed-loop forecast from a trained network");
    auto* compare = app.add_subcommand("compare", "paired curriculum/baseline experiment");
    for (auto* sub : {decompose, train, predict, compare}) add_common(sub);
    train->add_option("--mode", opt.mode, "curriculum or baseline")->check(CLI::IsMember({"curriculum", "baseline"}));
    predict->add_option("--network", opt.network, "network JSON (default: <output_dir>/network.json)");
    predict->add_option("--horizon", horizon, "forecast length");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report(err, ErrorKind::ConfigError, e.what());
        return kExitConfig;
    }

    try {
        if (horizon) overrides.push_back("horizon=" + std::to_string(*horizon));
        const auto cfg = load_config(config_path, overrides);
        if (decompose->parsed()) return cmd_decompose(cfg, out, err);
        if (train->parsed()) return cmd_train(cfg, opt, out, err);
        if (predict->parsed()) return cmd_predict(cfg, opt, out, err);
        return cmd_compare(cfg, out, err);
    } catch (const Error& e) {
        report(err, e.kind(), e.what());
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        report(err, ErrorKind::IoError, e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        report(err, ErrorKind::InvalidArgument, e.what());
        return kExitRuntime;
    }
}

} // namespace ssann::cli
