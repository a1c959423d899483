#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "qwalk/json_io.hpp"

using namespace qwalk;

TEST(JsonIo, DoubleFormatRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 123456789.123456789, -0.0}) {
        const std::string s = format_double(v);
        const double back = std::stod(s);
        EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << s;
    }
    EXPECT_EQ(format_double(2.0), "2.0");
}

TEST(JsonIo, ChainRoundTripIsBitFaithful) {
    const auto j = build_johnson(5, 2);
    const std::string text = to_json_text(chain_to_json(j));
    const auto back = chain_from_json(Json::parse(text));
    ASSERT_EQ(back.size(), j.size());
    EXPECT_TRUE((back.transitions().array() == j.transitions().array()).all());
    EXPECT_EQ(back.states()[3], Json(j.states()[3]));
    EXPECT_EQ(to_json_text(chain_to_json(back)), text);
}

TEST(JsonIo, ExchangeWalkRoundTrip) {
    const auto x = build_exchange_walk(4, 2);
    const auto back = chain_from_json(Json::parse(to_json_text(chain_to_json(x), -1)));
    EXPECT_TRUE((back.transitions().array() == x.transitions().array()).all());
}

TEST(JsonIo, MalformedChain) {
    EXPECT_THROW(chain_from_json(Json::parse(R"({"states": [1, 2]})")), InvalidArgument);
    EXPECT_THROW(chain_from_json(Json::parse(R"({"states": [1, 2], "P": [[1, 0], [0.5]]})")), InvalidArgument);
    EXPECT_THROW(chain_from_json(Json::parse(R"({"states": [1, 2], "P": [[0.7, 0.7], [0.5, 0.5]]})")), DegenerateChain);
}

TEST(JsonIo, SpectrumReportFields) {
    const auto k = build_complete_graph(4);
    const Json j = to_json(walk_spectrum(k, analyze(k)));
    for (const char* key : {"singular_values", "predicted_phases", "measured_phases", "phase_gap", "delta", "gap_margin"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_NEAR(j["gap_margin"].get<double>(), 2.0 * std::acos(1.0 / 3.0) - 2.0 * std::sqrt(2.0 / 3.0), 1e-12);
}

TEST(JsonIo, SearchOutcomeShape) {
    SearchOutcome<Subset> o;
    o.found = Subset{1, 2};
    o.success = true;
    o.trace = {{0, 0.25}, {1, 1.0}};
    const Json j = Json::parse(to_json_text(to_json(o)));
    EXPECT_EQ(j["found"], Json::array({1, 2}));
    EXPECT_TRUE(j["success"].get<bool>());
    EXPECT_EQ(j["trace"][1][0], 1);
    EXPECT_TRUE(j["counters"].contains("walk_calls"));
    SearchOutcome<int> none;
    EXPECT_TRUE(to_json(none)["found"].is_null());
}

TEST(JsonIo, CsvRow) {
    CsvRow row;
    row << "K4" << 3 << std::size_t{14} << 0.5;
    EXPECT_EQ(row.str(), "K4,3,14,0.5");
}
