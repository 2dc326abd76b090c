#include "stratrd/hypothesis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stratrd/mathutil.hpp"

namespace stratrd {

const char* test_method_name(TestMethod m) {
    switch (m) {
        case TestMethod::MH_CHI2: return "mh_chi2";
        case TestMethod::WALD_MH: return "wald_mh";
        case TestMethod::WALD_ATE: return "wald_ate";
    }
    return "unknown";
}

const char* null_hypothesis_name(NullHypothesis h) {
    switch (h) {
        case NullHypothesis::SHARP_NULL: return "sharp_null";
        case NullHypothesis::DELTA_MH_ZERO: return "delta_mh_zero";
        case NullHypothesis::DELTA_ATE_ZERO: return "delta_ate_zero";
    }
    return "unknown";
}

TestResult mh_test(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    TestResult result;
    result.method = TestMethod::MH_CHI2;
    result.null_hypothesis = NullHypothesis::SHARP_NULL;

    double deviation_sum = 0.0;
    double variance_sum = 0.0;
    bool adequate = true;
    for (const auto& s : dataset.strata) {
        const double nn = static_cast<double>(s.total());
        if (nn < 2.0) {
            result.warnings.push_back(
                {WarningCode::SingletonStratum,
                 "stratum '" + s.label + "' has a single subject and is skipped"});
            continue;
        }
        const double n1 = static_cast<double>(s.treated_total());
        const double n0 = static_cast<double>(s.control_total());
        const double r1 = static_cast<double>(s.responder_total());
        const double r0 = static_cast<double>(s.nonresponder_total());
        const double expected = r1 * n1 / nn;
        const double deviation = static_cast<double>(s.n11) - expected;
        const double variance = r1 * r0 * n1 * n0 / (nn * nn * (nn - 1.0));
        deviation_sum += deviation;
        variance_sum += variance;
        if (variance == 0.0 && deviation != 0.0) {
            result.warnings.push_back(
                {WarningCode::ZeroVarianceDeviation,
                 "stratum '" + s.label + "' has zero variance but nonzero deviation"});
        }
        if (std::fabs(deviation) <= 5.0) adequate = false;
    }
    if (variance_sum == 0.0) {
        throw Error(ErrorCode::ZeroTotalVariance,
                    "hypergeometric variance is zero in every stratum");
    }
    if (!adequate) {
        result.warnings.push_back(
            {WarningCode::Chi2Adequacy,
             "some |n11k - E(n11k)| <= 5; chi-square approximation may be inaccurate "
             "at the 0.05 level"});
    }
    result.statistic = deviation_sum * deviation_sum / variance_sum;
    result.p_value = chi2_1_sf(result.statistic);
    return result;
}

TestResult wald_test(const StratifiedDataset& dataset, Estimand estimand,
                     double null_value) {
    const PointEstimate estimate = mh_estimate(dataset);
    const VarianceEstimate variance = estimand == Estimand::DELTA_MH
                                          ? var_mgr_mh(dataset)
                                          : var_mgr_ate(dataset);
    TestResult result;
    result.method = estimand == Estimand::DELTA_MH ? TestMethod::WALD_MH
                                                   : TestMethod::WALD_ATE;
    result.null_hypothesis = estimand == Estimand::DELTA_MH
                                 ? NullHypothesis::DELTA_MH_ZERO
                                 : NullHypothesis::DELTA_ATE_ZERO;
    result.warnings = variance.warnings;
    const double var = variance.reported_variance();
    const double diff = estimate.value - null_value;
    if (var == 0.0) {
        result.statistic = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        result.p_value = diff == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.statistic = diff * diff / var;
    result.p_value = chi2_1_sf(result.statistic);
    return result;
}

} // namespace stratrd
