#include "ssann/errors.hpp"
#include "ssann/io.hpp"
#include "ssann/mlp.hpp"
#include "support/expect_error.hpp"
#include "support/tempdir.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace ssann;
using support::expect_kind;

TEST(FormatReal, RoundTripsDoubles) {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 6.02214076e23}) {
        EXPECT_EQ(std::strtod(io::format_real(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(io::format_real(0.5), "0.5");
}

TEST(NetworkJson, RoundTripIsExact) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto net = mlp::init_network(1 + seed % 6, 1 + seed % 9, seed);
        for (double& b : net.hidden_biases()) b = 1.0 / static_cast<double>(seed + 3);
        net.output_bias() = -0.1 * static_cast<double>(seed);
        const auto text = io::network_to_json(net).dump(2);
        EXPECT_EQ(io::network_from_json(nlohmann::json::parse(text)), net);
    }
}

TEST(NetworkJson, DocumentShape) {
    const auto doc = io::network_to_json(mlp::init_network(5, 10, 1));
    EXPECT_EQ(doc["format_version"], 1);
    EXPECT_EQ(doc["hidden_weights"].size(), 10u);
    EXPECT_EQ(doc["hidden_weights"][0].size(), 5u);
    EXPECT_EQ(doc["output_weights"].size(), 1u);
    EXPECT_EQ(doc["output_weights"][0].size(), 10u);
    EXPECT_EQ(doc["hidden_activation"], "tanh");
    EXPECT_EQ(doc["output_activation"], "identity");
}

TEST(NetworkJson, RejectsMalformedDocuments) {
    const auto good = io::network_to_json(mlp::init_network(3, 2, 1));

    auto short_row = good;
    short_row["hidden_weights"][1].erase(0);
    expect_kind(ErrorKind::DimensionMismatch, [&] { io::network_from_json(short_row); });

    auto missing = good;
    missing.erase("output_bias");
    expect_kind(ErrorKind::ParseError, [&] { io::network_from_json(missing); });

    auto version = good;
    version["format_version"] = 2;
    expect_kind(ErrorKind::ParseError, [&] { io::network_from_json(version); });

    auto wrong_type = good;
    wrong_type["hidden_biases"][0] = "x";
    expect_kind(ErrorKind::ParseError, [&] { io::network_from_json(wrong_type); });

    auto act = good;
    act["hidden_activation"] = "relu";
    expect_kind(ErrorKind::InvalidArgument, [&] { io::network_from_json(act); });
}

TEST(TraceCsv, HeaderAndRows) {
    const std::vector<TraceRow> rows{{0, 1, 0.5, 0.25}, {1, 1, 0.125, 0.0625}};
    EXPECT_EQ(io::trace_csv(rows), "stage,epoch,train_mse,validation_mse\n0,1,0.5,0.25\n1,1,0.125,0.0625\n");
}

TEST(WriteAtomic, ReplacesContentAndLeavesNoTemporary) {
    support::TempDir dir;
    const auto p = dir.path() / "out.txt";
    io::write_atomic(p, "first");
    io::write_atomic(p, "second");
    EXPECT_EQ(io::read_file(p), "second");
    EXPECT_FALSE(std::filesystem::exists(dir.path() / "out.txt.tmp"));
    expect_kind(ErrorKind::IoError, [&] { io::write_atomic(dir.path() / "no" / "such" / "dir.txt", "x"); });
    expect_kind(ErrorKind::FileNotFound, [&] { io::read_file(dir.path() / "absent"); });
}
