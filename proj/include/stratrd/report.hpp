#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stratrd/hypothesis.hpp"
#include "stratrd/simulation.hpp"
#include "stratrd/tables.hpp"
#include "stratrd/variance.hpp"

namespace stratrd {

// One variance method applied to a point estimate. `se` and `ci` are unset
// when the raw variance is negative (Sato on pathological tables); the raw
// variance is always kept.
struct SeEntry {
    VarianceMethod method = VarianceMethod::GR;
    double variance = 0.0;
    std::optional<double> se;
    std::optional<ConfidenceInterval> ci;
    std::optional<std::pair<double, double>> components;
    std::vector<Warning> warnings;
    int failed_replicates = 0;

    bool operator==(const SeEntry&) const = default;
};

struct EstimateEntry {
    Estimator estimator = Estimator::MH;
    Estimand estimand = Estimand::DELTA_MH;
    double value = 0.0;
    int strata_used = 0;
    int strata_dropped = 0;
    std::vector<SeEntry> ses;

    bool operator==(const EstimateEntry&) const = default;
};

struct TestEntry {
    TestResult result;
    bool available = true;
    std::string error; // set when the test could not run

    bool operator==(const TestEntry&) const = default;
};

struct DatasetDigest {
    int stratum_count = 0;
    long long n = 0;
    int strata_dropped = 0;

    bool operator==(const DatasetDigest&) const = default;
};

struct AnalysisReport {
    DatasetDigest digest;
    double level = 0.95;
    std::vector<EstimateEntry> estimates;
    std::vector<TestEntry> tests;
    std::vector<std::string> warnings;

    bool operator==(const AnalysisReport&) const = default;
};

struct AnalyzeOptions {
    double level = 0.95;
    int bootstrap_replicates = 0; // 0 disables the bootstrap column
    std::uint64_t seed = 0;
};

// Runs every estimator, variance method and test on the dataset. Bootstrap
// resampling uses `records` when given, otherwise the dataset expanded back
// to subject records.
AnalysisReport analyze_dataset(const StratifiedDataset& dataset,
                               const AnalyzeOptions& options = {},
                               const std::vector<SubjectRecord>* records = nullptr);

nlohmann::ordered_json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

// Human-readable trial-report table: entries are multiplied by 100 and
// rounded half-to-even at two decimals.
std::string report_to_table(const AnalysisReport& report);

// Scenario summaries as JSON (full precision) and CSV (entries x100, one
// decimal place).
nlohmann::ordered_json summaries_to_json(const std::vector<ScenarioSummary>& summaries);
std::string summaries_to_csv(const std::vector<ScenarioSummary>& summaries);

} // namespace stratrd
