#include "ssann/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ssann::io {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json real_array(std::span<const double> values) {
    auto arr = nlohmann::json::array();
    for (const double v : values) arr.push_back(v);
    return arr;
}

nlohmann::json network_to_json(const mlp::Network& net) {
    const std::size_t m = net.input_dim();
    auto rows = nlohmann::json::array();
    for (std::size_t h = 0; h < net.hidden_dim(); ++h) {
        rows.push_back(real_array(net.hidden_weights().subspan(h * m, m)));
    }
    return {
        {"format_version", kNetworkFormatVersion},
        {"input_dim", net.input_dim()},
        {"hidden_dim", net.hidden_dim()},
        {"hidden_activation", std::string(mlp::to_string(net.hidden_activation))},
        {"output_activation", std::string(mlp::to_string(net.output_activation))},
        {"hidden_weights", rows},
        {"hidden_biases", real_array(net.hidden_biases())},
        {"output_weights", nlohmann::json::array({real_array(net.output_weights())})},
        {"output_bias", net.output_bias()},
    };
}

namespace {

void copy_reals(const nlohmann::json& arr, std::span<double> out, const char* field) {
    if (!arr.is_array() || arr.size() != out.size()) {
        throw Error(ErrorKind::DimensionMismatch, std::string("network field ") + field + " has the wrong shape");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = arr[i].get<double>();
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, std::string("non-finite ") + field);
        out[i] = v;
    }
}

} // namespace

mlp::Network network_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format_version").get<int>() != kNetworkFormatVersion) {
            throw Error(ErrorKind::ParseError, "unsupported network format_version");
        }
        const auto m = doc.at("input_dim").get<std::size_t>();
        const auto hdim = doc.at("hidden_dim").get<std::size_t>();
        if (m == 0 || hdim == 0) throw Error(ErrorKind::BadDimensions, "network dimensions must be positive");

        mlp::Network net(m, hdim);
        net.hidden_activation = mlp::activation_from_string(doc.at("hidden_activation").get<std::string>());
        net.output_activation = mlp::activation_from_string(doc.at("output_activation").get<std::string>());
        if (net.output_activation != mlp::Activation::Identity) {
            throw Error(ErrorKind::InvalidArgument, "output activation must be identity");
        }
        const auto& rows = doc.at("hidden_weights");
        if (!rows.is_array() || rows.size() != hdim) {
            throw Error(ErrorKind::DimensionMismatch, "network field hidden_weights has the wrong shape");
        }
        for (std::size_t h = 0; h < hdim; ++h) {
            copy_reals(rows[h], net.hidden_weights().subspan(h * m, m), "hidden_weights");
        }
        copy_reals(doc.at("hidden_biases"), net.hidden_biases(), "hidden_biases");
        const auto& out = doc.at("output_weights");
        if (!out.is_array() || out.size() != 1) {
            throw Error(ErrorKind::DimensionMismatch, "network field output_weights has the wrong shape");
        }
        copy_reals(out[0], net.output_weights(), "output_weights");
        net.output_bias() = doc.at("output_bias").get<double>();
        if (!std::isfinite(net.output_bias())) throw Error(ErrorKind::NonFiniteInput, "non-finite output_bias");
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("network document: ") + e.what());
    }
}

std::string trace_csv(std::span<const TraceRow> rows) {
    std::string out = "stage,epoch,train_mse,validation_mse\n";
    for (const auto& r : rows) {
        out += std::to_string(r.stage) + ',' + std::to_string(r.epoch) + ',' + format_real(r.train_mse) + ',' +
               format_real(r.validation_mse) + '\n';
    }
    return out;
}

} // namespace ssann::io
