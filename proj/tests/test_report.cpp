#include <doctest.h>

#include <cmath>
#include <string>

#include "stratrd/mathutil.hpp"
#include "stratrd/report.hpp"
#include "testutil.hpp"

using namespace stratrd;
namespace tu = stratrd::testutil;

TEST_CASE("analyze_dataset assembles the full CALGB report") {
    AnalyzeOptions options;
    options.bootstrap_replicates = 200;
    options.seed = 20250809;
    const std::vector<SubjectRecord> records = calgb_records();
    const AnalysisReport report = analyze_dataset(calgb_dataset(), options, &records);

    CHECK(report.digest.stratum_count == 21);
    CHECK(report.digest.n == 156);
    CHECK(report.digest.strata_dropped == 0);
    REQUIRE(report.estimates.size() == 4);

    const EstimateEntry& mh_row = report.estimates[0];
    CHECK(mh_row.estimator == Estimator::MH);
    CHECK(mh_row.estimand == Estimand::DELTA_MH);
    CHECK(std::fabs(mh_row.value - 0.0572) < 2e-4);
    REQUIRE(mh_row.ses.size() == 3);
    CHECK(mh_row.ses[0].method == VarianceMethod::GR);
    CHECK(std::fabs(*mh_row.ses[0].se - 0.0632) < 2e-4);
    CHECK(std::fabs(*mh_row.ses[1].se - 0.0799) < 2e-4);
    CHECK(std::fabs(*mh_row.ses[2].se - 0.0730) < 2e-4);

    const EstimateEntry& ate_row = report.estimates[1];
    CHECK(ate_row.estimand == Estimand::DELTA_ATE);
    REQUIRE(ate_row.ses.size() == 2);
    CHECK(std::fabs(*ate_row.ses[0].se - 0.0774) < 2e-4);
    CHECK(ate_row.ses[1].method == VarianceMethod::BOOTSTRAP);
    CHECK(*ate_row.ses[1].se > 0.06);
    CHECK(*ate_row.ses[1].se < 0.09);

    CHECK(std::fabs(report.estimates[2].value - 0.0569) < 2e-4);
    CHECK(std::fabs(report.estimates[3].value - 0.0179) < 2e-4);

    REQUIRE(report.tests.size() == 3);
    CHECK(report.tests[0].result.method == TestMethod::MH_CHI2);
    CHECK(report.tests[1].result.method == TestMethod::WALD_MH);
    CHECK(report.tests[2].result.method == TestMethod::WALD_ATE);
}

TEST_CASE("JSON serialization round-trips losslessly") {
    AnalyzeOptions options;
    options.bootstrap_replicates = 50;
    options.seed = 31;
    const AnalysisReport report = analyze_dataset(calgb_dataset(), options);
    const std::string dumped = report_to_json(report).dump();
    const AnalysisReport parsed = report_from_json(nlohmann::json::parse(dumped));
    CHECK(parsed == report);
    // And the re-serialized bytes match too.
    CHECK(report_to_json(parsed).dump() == dumped);
}

TEST_CASE("JSON round-trips random datasets") {
    RngStream rng(4321);
    for (int trial = 0; trial < 20; ++trial) {
        const StratifiedDataset d = tu::random_dataset(rng);
        const AnalysisReport report = analyze_dataset(d);
        const std::string dumped = report_to_json(report).dump();
        CHECK(report_from_json(nlohmann::json::parse(dumped)) == report);
    }
}

TEST_CASE("JSON round-trips a dataset with dropped strata and warnings") {
    const auto d = tu::dataset({{3, 1, 1, 3}, {2, 0, 1, 0}, {1, 2, 1, 2}});
    const AnalysisReport report = analyze_dataset(d);
    CHECK(report.digest.strata_dropped == 1);
    CHECK_FALSE(report.warnings.empty());
    const std::string dumped = report_to_json(report).dump();
    CHECK(report_from_json(nlohmann::json::parse(dumped)) == report);
}

TEST_CASE("table output equals JSON values rounded half-to-even") {
    const AnalysisReport report = analyze_dataset(calgb_dataset());
    const std::string table = report_to_table(report);
    // The MH estimate appears as its x100 half-even rounding.
    char expected[32];
    std::snprintf(expected, sizeof(expected), "%.2f",
                  round_half_even(report.estimates[0].value * 100.0, 2));
    CHECK(table.find(expected) != std::string::npos);
    char se_expected[32];
    std::snprintf(se_expected, sizeof(se_expected), "%.2f",
                  round_half_even(*report.estimates[0].ses[0].se * 100.0, 2));
    CHECK(table.find(se_expected) != std::string::npos);
}

TEST_CASE("round_half_even resolves ties toward even digits") {
    CHECK(round_half_even(0.125, 2) == doctest::Approx(0.12));
    CHECK(round_half_even(0.135, 2) == doctest::Approx(0.14).epsilon(1e-9));
    CHECK(round_half_even(2.5, 0) == 2.0);
    CHECK(round_half_even(3.5, 0) == 4.0);
}

TEST_CASE("scenario summaries serialize to JSON and CSV") {
    ScenarioConfig c;
    c.id = "1a2a3a4a";
    c.n = 500;
    c.pi1 = 2.0 / 3.0;
    c.regime = Regime::LARGE;
    c.effect = EffectPattern::COMMON_4A;
    c.generation_seed = 5;
    c.run_seed = 6;
    const ScenarioSummary summary = run_scenario(c, 50, MethodSelection{}, 2);
    const auto json = summaries_to_json({summary});
    REQUIRE(json.size() == 1);
    CHECK(json[0]["scenario"] == "1a2a3a4a");
    CHECK(json[0]["cells"].size() == summary.cells.size());

    const std::string csv = summaries_to_csv({summary});
    CHECK(csv.find("scenario,estimand,truth,metric") == 0);
    CHECK(csv.find("1a2a3a4a,delta_mh") != std::string::npos);
    CHECK(csv.find("1a2a3a4a,delta_ate") != std::string::npos);
}
