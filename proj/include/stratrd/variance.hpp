#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stratrd/estimators.hpp"
#include "stratrd/tables.hpp"

namespace stratrd {

enum class VarianceMethod { GR, SATO, MGR_MH, MGR_ATE, PS, BOOTSTRAP, UNADJUSTED };
enum class Estimand { DELTA_MH, DELTA_ATE };
enum class LambdaRule { SATO_HALF, GR_LAMBDA };

const char* variance_method_name(VarianceMethod m);
const char* estimand_name(Estimand e);

// A variance estimate in squared-risk-difference units. Sato's estimator
// may come out negative on pathological tables; it is returned as-is with
// a NEGATIVE_VARIANCE warning, never clamped. Additive ATE methods carry
// their (sigma2, nu2) components.
struct VarianceEstimate {
    double variance = 0.0;
    VarianceMethod method = VarianceMethod::GR;
    Estimand estimand = Estimand::DELTA_MH;
    std::optional<std::pair<double, double>> components; // (sigma2, nu2)
    std::vector<Warning> warnings;
    int failed_replicates = 0; // bootstrap only

    // Variance with the heterogeneity component floored at sigma2; what the
    // CI layer and Wald tests consume for ATE methods.
    double reported_variance() const {
        if (components && variance < components->first) return components->first;
        return variance;
    }
};

// Simulation ground truth: stratum probabilities, allocation, per-stratum
// response probabilities and risk differences.
struct TrueParameters {
    std::vector<double> rho;   // P(Z = z_k), sums to 1
    double pi1 = 0.5;
    double pi0 = 0.5;
    std::vector<double> p1;    // p_{1k}
    std::vector<double> p0;    // p_{0k}
    std::vector<double> delta; // p_{1k} - p_{0k}
    double delta_ate = 0.0;    // sum(rho_k * delta_k)

    std::size_t stratum_count() const { return rho.size(); }
};

// Builds TrueParameters from (rho, pi1, p0, delta), deriving p1 and the
// ATE and checking feasibility (probabilities in [0, 1], rho sums to 1).
TrueParameters make_true_parameters(std::vector<double> rho, double pi1,
                                    std::vector<double> p0,
                                    std::vector<double> delta);

// Greenland-Robins plug-in variance for the MH risk difference.
VarianceEstimate var_gr(const StratifiedDataset& dataset);

// Sato's variance in the P_k / Q_k form, derived under the common risk
// difference assumption.
VarianceEstimate var_sato(const StratifiedDataset& dataset);

// The common form sum(lambda_k * A_k + (1 - lambda_k) * B_k) / (sum w)^2
// that contains both GR (lambda = lambda_{k,GR}) and Sato (lambda = 1/2).
VarianceEstimate var_common_form(const StratifiedDataset& dataset, LambdaRule rule);

// Modified GR estimator for delta_MH: per-arm terms scaled by
// (n_.ak / (n_.ak - 1))^{I(n_.ak > 1)}, unbiased across regimes.
VarianceEstimate var_mgr_mh(const StratifiedDataset& dataset);

// Modified GR estimator for delta_ATE: sigma2 from var_mgr_mh plus the
// nu2 term accounting for stratum-size and allocation variability.
VarianceEstimate var_mgr_ate(const StratifiedDataset& dataset);

// Variance estimator for the PS estimator (sigma2_PS + nu2_PS).
VarianceEstimate var_ps(const StratifiedDataset& dataset);

// Pooled two-sample variance S1^2/n_.1 + S0^2/n_.0 for the unadjusted
// difference in means.
VarianceEstimate var_unadjusted(const StratifiedDataset& dataset);

// Nonparametric bootstrap: resamples subjects with replacement B times and
// recomputes the chosen point estimator. Replicates where the estimator
// errors are skipped and counted. Deterministic given seed; replicate b
// always uses the stream derived from (seed, b).
struct BootstrapOptions {
    int replicates = 200;
    std::uint64_t seed = 0;
};
VarianceEstimate var_bootstrap(std::span<const SubjectRecord> records,
                               Estimator estimator, const BootstrapOptions& options);

// Theoretical variance sigma_n^2 with true response probabilities plugged
// into the realized margins; the oracle the simulation suite compares
// estimated SEs against.
double theoretical_sigma2(const StratifiedDataset& margins, const TrueParameters& truth);

// Theoretical nu_n^2 evaluated with true delta_k, delta_ATE, pi and rho on
// the realized margins.
double theoretical_nu2(const StratifiedDataset& margins, const TrueParameters& truth);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;

    bool operator==(const ConfidenceInterval&) const = default;
};

// Wald interval estimate +/- z * sqrt(variance), clipped to [-1, 1]. For
// additive ATE methods the floored reported_variance() is used.
ConfidenceInterval confidence_interval(const PointEstimate& estimate,
                                       const VarianceEstimate& variance,
                                       double level = 0.95);

} // namespace stratrd
