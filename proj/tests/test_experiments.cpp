#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lobsim/config.h"
#include "lobsim/experiments.h"
#include "lobsim/stats.h"

using namespace lobsim;

namespace {

AbDesign tiny_design(int parallel) {
    AbDesign d;
    d.type_a = "SHVR";
    d.type_b = "ZIP";
    d.n = 3;
    d.trials = 4;
    d.master_seed = 77;
    d.parallel = parallel;
    d.base.duration = 60.0;
    d.base.blocks = {BlockEvent{30.0, Side::bid, 1, 20}};
    return d;
}

}  // namespace

TEST(MannWhitney, SeparatedSamplesExact) {
    const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    const auto r = mann_whitney_u(x, y);
    EXPECT_TRUE(r.exact);
    EXPECT_DOUBLE_EQ(r.u, 0.0);
    EXPECT_NEAR(r.p, 0.1, 1e-12);
}

TEST(MannWhitney, InterleavedSamplesExact) {
    const std::vector<double> x{1, 3}, y{2, 4};
    const auto r = mann_whitney_u(x, y);
    EXPECT_DOUBLE_EQ(r.u, 1.0);
    EXPECT_NEAR(r.p, 2.0 / 3.0, 1e-12);
}

TEST(MannWhitney, LargeSamplesUseNormalApproximation) {
    std::vector<double> x(30), y(30);
    std::iota(x.begin(), x.end(), 0.0);
    std::iota(y.begin(), y.end(), 0.5);
    const auto r = mann_whitney_u(x, y);
    EXPECT_FALSE(r.exact);
    EXPECT_GT(r.p, 0.5);
}

TEST(MannWhitney, AllTiedGivesPOne) {
    const std::vector<double> x(15, 2.0), y(15, 2.0);
    EXPECT_DOUBLE_EQ(mann_whitney_u(x, y).p, 1.0);
}

TEST(MannWhitney, EmptySampleThrows) {
    const std::vector<double> x{1.0}, y;
    EXPECT_THROW(mann_whitney_u(x, y), std::invalid_argument);
}

TEST(BoxSummary, TukeyHingesOnOneToHundred) {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    const auto b = box_summary(v);
    EXPECT_DOUBLE_EQ(b.median, 50.5);
    EXPECT_DOUBLE_EQ(b.q1, 25.5);
    EXPECT_DOUBLE_EQ(b.q3, 75.5);
    EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
    EXPECT_DOUBLE_EQ(b.whisker_high, 100.0);
    EXPECT_TRUE(b.outliers.empty());
}

TEST(BoxSummary, FlagsOutliers) {
    const std::vector<double> v{1, 2, 3, 4, 5, 100};
    const auto b = box_summary(v);
    ASSERT_EQ(b.outliers.size(), 1u);
    EXPECT_DOUBLE_EQ(b.outliers[0], 100.0);
    EXPECT_DOUBLE_EQ(b.whisker_high, 5.0);
    EXPECT_THROW(box_summary(std::vector<double>{}), std::invalid_argument);
}

TEST(MeanCi, KnownTInterval) {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto ci = mean_ci(v);
    // t(0.975, 4) = 2.776445, s = sqrt(2.5)
    const double half = 2.7764451051977987 * std::sqrt(2.5) / std::sqrt(5.0);
    EXPECT_DOUBLE_EQ(ci.mean, 3.0);
    EXPECT_NEAR(ci.low, 3.0 - half, 1e-9);
    EXPECT_NEAR(ci.high, 3.0 + half, 1e-9);
    EXPECT_THROW(mean_ci(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(AbDesign, TrialConfigBuildsBalancedRoster) {
    const auto d = tiny_design(1);
    const auto c = d.trial_config(2);
    ASSERT_EQ(c.roster.size(), 4u);
    for (const auto& e : c.roster) EXPECT_EQ(e.count, 3);
    EXPECT_EQ(c.seed, derive_seed(77, 2));
    EXPECT_NE(d.trial_config(1).seed, c.seed);
}

TEST(AbDesign, ValidateRejectsBadDesigns) {
    auto d = tiny_design(1);
    d.trials = 0;
    EXPECT_THROW(d.validate(), ConfigError);
    d = tiny_design(1);
    d.type_a = "XYZ";
    EXPECT_THROW(d.validate(), ConfigError);
    d = tiny_design(0);
    EXPECT_THROW(d.validate(), ConfigError);
}

TEST(RunAb, ResultsDoNotDependOnThreadCount) {
    const auto serial = run_ab(tiny_design(1));
    const auto parallel = run_ab(tiny_design(3));
    ASSERT_EQ(serial.size(), 4u);
    EXPECT_EQ(serial, parallel);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].trial, static_cast<int>(i));
        EXPECT_DOUBLE_EQ(serial[i].diff, serial[i].mean_a - serial[i].mean_b);
    }
}

TEST(TrialsCsv, RoundTrips) {
    const auto results = run_ab(tiny_design(1));
    std::stringstream io;
    write_trials_csv(io, results);
    const auto back = read_trials_csv(io);
    ASSERT_EQ(back.size(), results.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].seed, results[i].seed);
        EXPECT_DOUBLE_EQ(back[i].mean_a, results[i].mean_a);
        EXPECT_DOUBLE_EQ(back[i].diff, results[i].diff);
    }
}

TEST(TrialsCsv, RejectsMalformedInput) {
    std::istringstream bad("trial,seed\n1,2\n");
    EXPECT_THROW(read_trials_csv(bad), std::runtime_error);
}

TEST(Emit, WritesAllThreeFiles) {
    const auto results = run_ab(tiny_design(1));
    const auto s = summarize(results, "SHVR", "ZIP");
    const auto dir = std::filesystem::temp_directory_path() / "lobsim_emit_test";
    std::filesystem::remove_all(dir);
    emit(dir, results, s);
    for (const char* f : {"trials.csv", "summary.csv", "boxdata.csv"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    std::ifstream summary(dir / "summary.csv");
    std::stringstream text;
    text << summary.rdbuf();
    EXPECT_NE(text.str().find("type_a,SHVR"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Summarize, NeedsTwoTrials) {
    EXPECT_THROW(summarize(std::vector<TrialResult>(1)), std::invalid_argument);
}

TEST(Config, ParsesFullDesign) {
    const auto d = parse_design(R"(
experiment:
  type_a: ZZIAA
  type_b: AA
  n: 5
  trials: 20
  seed: 9
  parallel: 2
session:
  duration: 300
  demand:
    limits: uniform
    low: 50
    high: 150
    mode: drip
  blocks:
    - time: 100
      side: ask
      level_offset: 2
      quantity: 40
strategies:
  ishv:
    C: 3
impact:
  c: 4
  alpha: 0.7
)");
    EXPECT_EQ(d.type_a, "ZZIAA");
    EXPECT_EQ(d.n, 5);
    EXPECT_EQ(d.master_seed, 9u);
    EXPECT_DOUBLE_EQ(d.base.duration, 300.0);
    EXPECT_EQ(d.base.demand.limits.kind, LimitSchedule::Kind::uniform);
    EXPECT_EQ(d.base.demand.mode, ReplenishMode::drip);
    ASSERT_EQ(d.base.blocks.size(), 1u);
    EXPECT_EQ(d.base.blocks[0].side, Side::ask);
    EXPECT_EQ(d.base.blocks[0].quantity, 40);
    EXPECT_DOUBLE_EQ(d.base.params.ishv.C, 3.0);
    EXPECT_DOUBLE_EQ(d.base.params.impact.imbalance.alpha, 0.7);
}

TEST(Config, DefaultsWhenSectionsOmitted) {
    const auto d = parse_design("experiment:\n  type_a: ZZIZIP\n  type_b: ZIP\n");
    EXPECT_EQ(d.n, 10);
    EXPECT_EQ(d.trials, 100);
    EXPECT_EQ(d.base.blocks.size(), 1u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_design("experiment:\n  typo: 1\n"), ConfigError);
    EXPECT_THROW(parse_design("experiment:\n  n: -2\n"), ConfigError);
    EXPECT_THROW(parse_design("impact:\n  alpha: 2\n"), ConfigError);
    EXPECT_THROW(parse_design("session:\n  demand:\n    limits: zigzag\n"), ConfigError);
    EXPECT_THROW(parse_design("experiment: [1, 2"), ConfigError);
    EXPECT_THROW(load_design("/nonexistent/design.yaml"), ConfigError);
}
