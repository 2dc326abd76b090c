#pragma once

#include <vector>

#include "stratrd/tables.hpp"
#include "stratrd/variance.hpp"

namespace stratrd {

enum class TestMethod { MH_CHI2, WALD_MH, WALD_ATE };
enum class NullHypothesis { SHARP_NULL, DELTA_MH_ZERO, DELTA_ATE_ZERO };

const char* test_method_name(TestMethod m);
const char* null_hypothesis_name(NullHypothesis h);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int df = 1;
    TestMethod method = TestMethod::MH_CHI2;
    NullHypothesis null_hypothesis = NullHypothesis::SHARP_NULL;
    std::vector<Warning> warnings;

    bool operator==(const TestResult&) const = default;
};

// The MH chi-square test of the sharp null, using the hypergeometric
// moments E(n11k | T_k, R_k) = n_1.k n_.1k / n_..k and
// var(n11k | T_k, R_k) = n_1.k n_0.k n_.1k n_.0k / {n_..k^2 (n_..k - 1)}.
// Strata with n_..k = 1 carry no comparative information and are skipped
// with a warning; zero-variance strata keep their (always-zero) deviation
// in the numerator and contribute nothing to the denominator.
TestResult mh_test(const StratifiedDataset& dataset);

// Wald test of delta = null_value for the chosen estimand, with variance
// from var_mgr_mh (DELTA_MH) or var_mgr_ate (DELTA_ATE).
TestResult wald_test(const StratifiedDataset& dataset, Estimand estimand,
                     double null_value = 0.0);

} // namespace stratrd
