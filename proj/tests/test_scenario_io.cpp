#include <gtest/gtest.h>

#include <random>
#include <string>

#include "far/scenario_io.hpp"
#include "support/test_support.hpp"

namespace far {
namespace {

const char* kReference = R"({
  "bs_position_m": [350, 30, 30],
  "wall_width_m": 20,
  "y_bounds_m": [0, 20],
  "z_bounds_m": [0, 20],
  "total_bandwidth_hz": 1e7,
  "noise_power_dbm": -90,
  "ref_gain_db": -40,
  "path_loss_exp": 2,
  "medium_factor": 3,
  "users": [
    {"x_m": 100, "y_m": 40, "tx_power_dbm": 10, "min_rate_bps": 1e5},
    {"x_m": 250, "y_m": 5, "tx_power_w": 0.01, "min_rate_bps": 2e5}
  ]
})";

std::string with_replaced(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

TEST(ParseScenario, ReferenceFile) {
    const auto s = parse_scenario(kReference);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.bs_position, (Point3{350, 30, 30}));
    EXPECT_NEAR(s.noise_power_w, 1e-12, 1e-27);
    EXPECT_NEAR(s.ref_gain, 1e-4, 1e-19);
    EXPECT_NEAR(s.users[0].tx_power_w, 0.01, 1e-17);
    EXPECT_EQ(s.users[1].tx_power_w, 0.01);
    EXPECT_EQ(s.users[1].min_rate_bps, 2e5);
    EXPECT_TRUE(s.provenance.empty());
}

TEST(ParseScenario, BadMediumFactorNamesTheField) {
    try {
        parse_scenario(with_replaced(kReference, "\"medium_factor\": 3", "\"medium_factor\": 0.5"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "medium_factor must exceed 1");
    }
}

TEST(ParseScenario, OmittedRadioParameterGetsDefaultAndNote) {
    const auto s = parse_scenario(with_replaced(kReference, "\"path_loss_exp\": 2,", ""));
    EXPECT_EQ(s.path_loss_exp, 2.0);
    ASSERT_EQ(s.provenance.size(), 1u);
    EXPECT_NE(s.provenance[0].find("path_loss_exp"), std::string::npos);
}

TEST(ParseScenario, MalformedJsonReportsPosition) {
    try {
        parse_scenario("{\n  \"wall_width_m\": 20,\n  oops\n}");
        FAIL();
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column"), std::string::npos) << msg;
    }
}

TEST(ParseScenario, UnknownKeysAreRejected) {
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"wall_width_m\"", "\"wall_width\": 1, \"wall_width_m\"")),
                 ParseError);
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"x_m\": 100", "\"x_m\": 100, \"z_m\": 1")), ParseError);
}

TEST(ParseScenario, ConflictingUnitsAreRejected) {
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"tx_power_w\": 0.01", "\"tx_power_w\": 0.01, \"tx_power_dbm\": 10")),
                 ParseError);
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"ref_gain_db\": -40", "\"ref_gain_db\": -40, \"ref_gain\": 1e-4")),
                 ParseError);
}

TEST(ParseScenario, MissingAndMistypedKeys) {
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"wall_width_m\": 20,", "")), ParseError);
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "\"wall_width_m\": 20", "\"wall_width_m\": \"20\"")),
                 ParseError);
    EXPECT_THROW(parse_scenario(with_replaced(kReference, "[0, 20],\n  \"z_bounds_m\"", "[0],\n  \"z_bounds_m\"")),
                 ParseError);
    EXPECT_THROW(parse_scenario("[1, 2]"), ParseError);
}

TEST(LoadScenario, MissingFile) { EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ValidationError); }

TEST(GenScenario, DeterministicBytes) {
    EXPECT_EQ(format_scenario(gen_scenario(42, 5)), format_scenario(gen_scenario(42, 5)));
    EXPECT_NE(format_scenario(gen_scenario(42, 5)), format_scenario(gen_scenario(43, 5)));
}

TEST(GenScenario, UsersInsideTheSquare) {
    const auto s = gen_scenario(7, 200);
    for (const auto& u : s.users) {
        EXPECT_GE(u.position.x, 0.0);
        EXPECT_LT(u.position.x, 300.0);
        EXPECT_GE(u.position.y, 0.0);
        EXPECT_LT(u.position.y, 300.0);
        EXPECT_NEAR(u.tx_power_w, 0.01, 1e-17);
        EXPECT_EQ(u.min_rate_bps, 1e5);
    }
    EXPECT_NE(s.provenance.front().find(kGeneratorName), std::string::npos);
}

TEST(GenScenario, SingleUserAndZeroUsers) {
    EXPECT_EQ(gen_scenario(1, 1).size(), 1u);
    EXPECT_THROW(gen_scenario(1, 0), ValidationError);
}

TEST(GenScenario, FirstDrawIsPinned) {
    // Guards the generator version: the first coordinate for seed 0 is the top
    // 53 bits of mt19937_64's first output, scaled to 300 m.
    std::mt19937_64 rng(0);
    const double expected = 300.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    EXPECT_EQ(gen_scenario(0, 1).users[0].position.x, expected);
}

TEST(ScenarioIoProperties, RoundTrip) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = testing::random_scenario(rng);
        s.provenance = {"trial " + std::to_string(trial)};
        const auto text = format_scenario(s);
        const auto back = parse_scenario(text);
        EXPECT_EQ(back, s);
        EXPECT_EQ(format_scenario(back), text);
    }
}

}  // namespace
}  // namespace far
