#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratrd/tables.hpp"

namespace stratrd {

enum class Estimator { MH, PS, UNADJUSTED, MH_MULTIARM };

const char* estimator_name(Estimator e);

// Per-stratum ingredients of the weighted estimators. For strata with an
// empty arm (`included == false`) the proportions and risk difference are
// left unset rather than carried as 0 or NaN.
struct StratumEffect {
    std::string label;
    std::optional<double> p1_hat;
    std::optional<double> p0_hat;
    std::optional<double> delta_hat;   // p1_hat - p0_hat
    double weight_mh = 0.0;            // n_.1k * n_.0k / n_..k
    double weight_ps = 0.0;            // n_..k / n
    bool included = false;             // n_.1k * n_.0k != 0
};

struct PointEstimate {
    double value = 0.0;
    Estimator estimator = Estimator::MH;
    int strata_used = 0;
    int strata_dropped = 0;
};

std::vector<StratumEffect> stratum_effects(const StratifiedDataset& dataset);

// MH risk difference: sum(w_k * delta_k) / sum(w_k) over included strata.
PointEstimate mh_estimate(const StratifiedDataset& dataset);

// Post-stratification: stratum-size weights n_..k / n, zero-arm strata
// dropped by the indicator.
PointEstimate ps_estimate(const StratifiedDataset& dataset);

// Pooled difference in means over all strata (zero-arm strata included in
// the pooling).
PointEstimate unadjusted_estimate(const StratifiedDataset& dataset);

// Pairwise MH risk difference between arms j and l of a 2xJ dataset, with
// w_k^{jl} = n_.jk * n_.lk / n_..k. With J = 2 and (j, l) = (1, 0) this is
// bit-identical to mh_estimate on the equivalent two-arm dataset.
PointEstimate mh_estimate_pair(const std::vector<MultiArmStratumTable>& strata,
                               int arm_j, int arm_l);

} // namespace stratrd
