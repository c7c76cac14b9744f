#include "ssann/cli.hpp"

#include "ssann/io.hpp"

#include <functional>
#include <map>

namespace ssann::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
    throw Error(ErrorKind::ConfigError, "config key '" + key + "' must be " + expected);
}

std::size_t as_count(const std::string& key, const json& v) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        bad_type(key, "a non-negative integer");
    }
    return v.get<std::size_t>();
}

double as_real(const std::string& key, const json& v) {
    if (!v.is_number()) bad_type(key, "a number");
    return v.get<double>();
}

bool as_bool(const std::string& key, const json& v) {
    if (!v.is_boolean()) bad_type(key, "true or false");
    return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
    if (!v.is_string()) bad_type(key, "a string");
    return v.get<std::string>();
}

using Setter = std::function<void(RunConfig&, const std::string&, const json&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"input", [](RunConfig& c, const std::string& k, const json& v) { c.input = as_string(k, v); }},
        {"time_column", [](RunConfig& c, const std::string& k, const json& v) { c.time_column = as_string(k, v); }},
        {"value_column", [](RunConfig& c, const std::string& k, const json& v) { c.value_column = as_string(k, v); }},
        {"time_tolerance", [](RunConfig& c, const std::string& k, const json& v) { c.time_tolerance = as_real(k, v); }},
        {"window", [](RunConfig& c, const std::string& k, const json& v) { c.window = as_count(k, v); }},
        {"embedding", [](RunConfig& c, const std::string& k, const json& v) { c.embedding = as_count(k, v); }},
        {"hidden", [](RunConfig& c, const std::string& k, const json& v) { c.hidden = as_count(k, v); }},
        {"pc_step", [](RunConfig& c, const std::string& k, const json& v) { c.pc_step = as_count(k, v); }},
        {"epochs", [](RunConfig& c, const std::string& k, const json& v) { c.epochs = as_count(k, v); }},
        {"learning_rate", [](RunConfig& c, const std::string& k, const json& v) { c.learning_rate = as_real(k, v); }},
        {"momentum", [](RunConfig& c, const std::string& k, const json& v) { c.momentum = as_real(k, v); }},
        {"patience", [](RunConfig& c, const std::string& k, const json& v) { c.patience = as_count(k, v); }},
        {"validation_fraction",
         [](RunConfig& c, const std::string& k, const json& v) { c.validation_fraction = as_real(k, v); }},
        {"shared_split", [](RunConfig& c, const std::string& k, const json& v) { c.shared_split = as_bool(k, v); }},
        {"seed", [](RunConfig& c, const std::string& k, const json& v) { c.seed = as_count(k, v); }},
        {"seeds",
         [](RunConfig& c, const std::string& k, const json& v) {
             if (!v.is_array()) bad_type(k, "an array of non-negative integers");
             c.seeds.clear();
             for (const auto& s : v) c.seeds.push_back(as_count(k, s));
         }},
        {"horizon", [](RunConfig& c, const std::string& k, const json& v) { c.horizon = as_count(k, v); }},
        {"holdout", [](RunConfig& c, const std::string& k, const json& v) { c.holdout = as_count(k, v); }},
        {"baseline_epochs",
         [](RunConfig& c, const std::string& k, const json& v) { c.baseline_epochs = as_count(k, v); }},
        {"forecast_seed_components",
         [](RunConfig& c, const std::string& k, const json& v) { c.forecast_seed_components = as_count(k, v); }},
        {"curve", [](RunConfig& c, const std::string& k, const json& v) { c.curve = as_bool(k, v); }},
        {"output_dir", [](RunConfig& c, const std::string& k, const json& v) { c.output_dir = as_string(k, v); }},
    };
    return table;
}

void assign(RunConfig& config, const std::string& key, const json& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
    }
    it->second(config, key, value);
}

void validate(const RunConfig& c) {
    if (c.input.empty()) throw Error(ErrorKind::ConfigError, "config key 'input' is required");
    if (c.window == 0) throw Error(ErrorKind::ConfigError, "window must be at least 1");
    if (c.embedding == 0) throw Error(ErrorKind::ConfigError, "embedding must be at least 1");
    if (c.hidden == 0) throw Error(ErrorKind::BadDimensions, "hidden must be at least 1");
    if (c.epochs == 0) throw Error(ErrorKind::ConfigError, "epochs must be at least 1");
    if (!(c.learning_rate > 0.0)) throw Error(ErrorKind::ConfigError, "learning_rate must be positive");
    if (!(c.momentum >= 0.0 && c.momentum < 1.0)) throw Error(ErrorKind::ConfigError, "momentum must lie in [0, 1)");
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0)) {
        throw Error(ErrorKind::BadFraction, "validation_fraction must lie in (0, 1)");
    }
    if (c.pc_step == 0) {
        throw Error(ErrorKind::BadStep, "pc_step must be at least 1");
    }
    if (c.horizon == 0) throw Error(ErrorKind::ConfigError, "horizon must be at least 1");
    if (c.seeds.empty()) throw Error(ErrorKind::ConfigError, "seeds must not be empty");
    if (!(c.time_tolerance >= 0.0)) throw Error(ErrorKind::ConfigError, "time_tolerance must be non-negative");
    if (c.forecast_seed_components > c.window) {
        throw Error(ErrorKind::BadComponentCount, "forecast_seed_components exceeds window");
    }
}

} // namespace

std::filesystem::path RunConfig::input_path() const {
    const std::filesystem::path p(input);
    return p.is_absolute() ? p : base_dir / p;
}

json RunConfig::echo() const {
    json seeds_json = json::array();
    for (const auto s : seeds) seeds_json.push_back(s);
    return {
        {"config",
         {
             {"input", input},
             {"time_column", time_column},
             {"value_column", value_column},
             {"time_tolerance", time_tolerance},
             {"window", window},
             {"embedding", embedding},
             {"hidden", hidden},
             {"pc_step", pc_step},
             {"epochs", epochs},
             {"learning_rate", learning_rate},
             {"momentum", momentum},
             {"patience", patience},
             {"validation_fraction", validation_fraction},
             {"shared_split", shared_split},
             {"seed", seed},
             {"seeds", seeds_json},
             {"horizon", horizon},
             {"holdout", holdout},
             {"baseline_epochs", baseline_epochs},
             {"forecast_seed_components", forecast_seed_components},
             {"curve", curve},
         }},
        {"overrides", overrides},
    };
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");

    RunConfig config;
    config.base_dir = path.parent_path();
    for (const auto& [key, value] : doc.items()) assign(config, key, value);

    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorKind::ConfigError, "override '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) value = text;
        assign(config, key, value);
        if (key != "output_dir") config.overrides.push_back(item);
    }
    validate(config);
    return config;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::DivergenceDetected:
    case ErrorKind::NonFiniteOutput:
    case ErrorKind::ZeroVarianceTargets:
    case ErrorKind::IoError:
        return kExitRuntime;
    default:
        return kExitConfig;
    }
}

} // namespace ssann::cli
