#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratrd/hypothesis.hpp"
#include "stratrd/rng.hpp"
#include "stratrd/tables.hpp"
#include "stratrd/variance.hpp"

namespace stratrd {

// Factor 3 asymptotic regimes.
enum class Regime { LARGE, SPARSE, MIXED };

// Factor 4 effect patterns plus the potential-outcome stress scenario.
enum class EffectPattern { COMMON_4A, VARYING_4B, VARYING_4C, EXTREME };

// How trials are drawn: per-subject binomial outcomes, or the
// potential-outcome (individual risk difference) tables.
enum class GenerationRoute { BINOMIAL, INDIVIDUAL_RD };

const char* regime_name(Regime r);
const char* effect_name(EffectPattern e);

struct ScenarioConfig {
    std::string id;          // e.g. "1a2a3a4a"
    int n = 500;             // factor 1
    double pi1 = 2.0 / 3.0;  // factor 2 (pi0 = 1 - pi1)
    Regime regime = Regime::LARGE;
    EffectPattern effect = EffectPattern::COMMON_4A;
    GenerationRoute route = GenerationRoute::BINOMIAL;
    std::uint64_t generation_seed = 0; // one-time draw of rho, p0, delta
    std::uint64_t run_seed = 0;        // per-replicate streams
};

// Proportions of the four potential-outcome classes in one stratum:
// (Y0,Y1) = (1,0), (0,1), (0,0), (1,1).
struct LambdaSpec {
    double rd_minus = 0.0; // lambda_{k,-1}
    double rd_plus = 0.0;  // lambda_{k,1}
    double null_00 = 0.0;  // lambda_{k,0}^{(0)}
    double null_11 = 0.0;  // lambda_{k,0}^{(1)}
};

// Minimal-overlap lambda table inducing given (p0k, delta_k):
// lambda_1 = max(delta,0), lambda_{-1} = max(-delta,0).
LambdaSpec lambda_from_effects(double p0, double delta);

// Realizes the scenario's ground truth. Fixed vectors for the large
// regime; one-time draws (tied to generation_seed) for sparse and mixed.
TrueParameters build_truth(const ScenarioConfig& config);

// n i.i.d. subjects: Z ~ Multinomial(rho) by inverse CDF, A ~ Bern(pi1),
// Y ~ Bern(p_{A,Z}). Stratum labels are "s1".."sK".
std::vector<SubjectRecord> sample_trial(const TrueParameters& truth, int n,
                                        std::uint64_t seed);

// Potential-outcome sampler: each subject draws a (Y0, Y1) class from the
// stratum's lambda table, then treatment selects the observed outcome.
std::vector<SubjectRecord> sample_trial_individual_rd(
    const std::vector<LambdaSpec>& lambdas, const std::vector<double>& rho,
    double pi1, int n, std::uint64_t seed);

struct MethodSelection {
    bool gr = true;
    bool sato = true;
    bool mgr = true;        // mGR_MH under delta_MH, mGR_ATE under delta_ATE
    bool ps = true;
    bool unadjusted = true;
    bool bootstrap = false;
    int bootstrap_replicates = 200;
};

struct CellKey {
    Estimator estimator = Estimator::MH;
    VarianceMethod se_method = VarianceMethod::GR;
    Estimand estimand = Estimand::DELTA_MH;

    bool operator==(const CellKey&) const = default;
};

// Monte Carlo metrics for one (estimator, SE method, estimand) cell.
struct CellSummary {
    double bias = 0.0;     // mean(estimate - truth)
    double sd = 0.0;       // sample SD of the estimates
    bool sd_available = false;
    double mean_se = 0.0;
    double cp = 0.0;       // 95% CI coverage of the truth
    double power = 0.0;    // rejection rate of delta = 0
    int runs_used = 0;
    int failures = 0;
};

struct ScenarioSummary {
    std::string scenario_id;
    int runs = 0;
    double truth_ate = 0.0;
    double truth_mh_avg = 0.0; // mean of the run-varying delta_MH
    std::vector<std::pair<CellKey, CellSummary>> cells;
};

// Runs `runs` replicates of the scenario and aggregates metrics. The
// result is a pure function of the config (seeds included) and `runs`,
// independent of `threads`.
ScenarioSummary run_scenario(const ScenarioConfig& config, int runs,
                             const MethodSelection& methods, int threads = 1);

// --- factorial grid --------------------------------------------------------

// Token lists per factor; empty means all levels. Valid tokens:
// 1a 1b 1c / 2a 2b / 3a 3b 3c / 4a 4b 4c 4x (4x = extreme scenario).
struct FactorSelection {
    std::vector<std::string> tokens;
};

// Expands a factor selection into scenario configs. Per-scenario seeds are
// derived from the two global seeds and the scenario's fixed position in
// the full grid, so a subset selection changes nothing about the scenarios
// it shares with the full run.
std::vector<ScenarioConfig> make_grid(const FactorSelection& selection,
                                      std::uint64_t generation_seed,
                                      std::uint64_t run_seed,
                                      GenerationRoute route = GenerationRoute::BINOMIAL);

} // namespace stratrd
