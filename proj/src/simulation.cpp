#include "stratrd/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "stratrd/mathutil.hpp"

namespace stratrd {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::LARGE: return "large";
        case Regime::SPARSE: return "sparse";
        case Regime::MIXED: return "mixed";
    }
    return "unknown";
}

const char* effect_name(EffectPattern e) {
    switch (e) {
        case EffectPattern::COMMON_4A: return "4a";
        case EffectPattern::VARYING_4B: return "4b";
        case EffectPattern::VARYING_4C: return "4c";
        case EffectPattern::EXTREME: return "4x";
    }
    return "unknown";
}

LambdaSpec lambda_from_effects(double p0, double delta) {
    const double p1 = p0 + delta;
    if (p0 < 0.0 || p0 > 1.0 || p1 < 0.0 || p1 > 1.0) {
        throw Error(ErrorCode::InfeasibleProbability,
                    "(p0, delta) imply a probability outside [0, 1]");
    }
    LambdaSpec l;
    l.rd_plus = std::max(delta, 0.0);
    l.rd_minus = std::max(-delta, 0.0);
    l.null_11 = p0 - l.rd_minus;
    l.null_00 = 1.0 - l.rd_plus - l.rd_minus - l.null_11;
    return l;
}

namespace {

// Sparse-regime stratum count per Factor 3b, and the small-strata count of
// the mixed regime per Factor 3c.
int sparse_stratum_count(int n) {
    if (n >= 500) return 30;
    if (n >= 300) return 18;
    return 15;
}

int mixed_small_count(int n) {
    if (n >= 500) return 15;
    if (n >= 300) return 9;
    return 12;
}

// Sparse-regime effect draws: fills (p0, delta) for `count` strata starting
// at `offset`, drawing once from the effect stream.
void draw_sparse_effects(EffectPattern effect, std::size_t offset, std::size_t count,
                         std::vector<double>& p0, std::vector<double>& delta,
                         RngStream& rng) {
    switch (effect) {
        case EffectPattern::COMMON_4A:
            for (std::size_t i = 0; i < count; ++i) {
                p0[offset + i] = rng.uniform(0.4, 0.7);
                delta[offset + i] = -0.1;
            }
            break;
        case EffectPattern::VARYING_4B: {
            const std::size_t half = (count + 1) / 2;
            for (std::size_t i = 0; i < count; ++i) {
                if (i < half) {
                    p0[offset + i] = rng.uniform(0.1, 0.2);
                    delta[offset + i] = sample_truncnorm(0.0, 0.1, 0.05, 0.05, rng);
                } else {
                    p0[offset + i] = rng.uniform(0.7, 0.8);
                    delta[offset + i] = sample_truncnorm(0.1, 0.2, 0.15, 0.05, rng);
                }
            }
            break;
        }
        case EffectPattern::VARYING_4C: {
            const std::size_t two_thirds =
                static_cast<std::size_t>(std::lround(2.0 * static_cast<double>(count) / 3.0));
            for (std::size_t i = 0; i < count; ++i) {
                if (i < two_thirds) {
                    p0[offset + i] = rng.uniform(0.8, 0.9);
                    delta[offset + i] = rng.uniform(-0.6, -0.5);
                } else {
                    p0[offset + i] = rng.uniform(0.4, 0.5);
                    delta[offset + i] = rng.uniform(0.1, 0.2);
                }
            }
            break;
        }
        case EffectPattern::EXTREME: {
            const std::vector<double> thirds = {1.0 / 3.0, 2.0 / 3.0, 1.0};
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t pick = rng.categorical(thirds);
                const double d = pick == 0 ? -1.0 : (pick == 1 ? 0.0 : 1.0);
                delta[offset + i] = d;
                if (d < 0.0) {
                    p0[offset + i] = 1.0;
                } else if (d > 0.0) {
                    p0[offset + i] = 0.0;
                } else {
                    p0[offset + i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
                }
            }
            break;
        }
    }
}

void large_effect_vectors(EffectPattern effect, std::vector<double>& p0,
                          std::vector<double>& delta) {
    switch (effect) {
        case EffectPattern::COMMON_4A:
            p0 = {0.5, 0.2, 0.6};
            delta = {-0.1, -0.1, -0.1};
            break;
        case EffectPattern::VARYING_4B:
            p0 = {0.1, 0.1, 0.7};
            delta = {0.0, 0.0, 0.2};
            break;
        case EffectPattern::VARYING_4C:
            p0 = {0.8, 0.9, 0.5};
            delta = {-0.5, -0.3, 0.2};
            break;
        case EffectPattern::EXTREME:
            p0 = {0.0, 1.0, 0.0};
            delta = {1.0, -1.0, 0.0};
            break;
    }
}

} // namespace

TrueParameters build_truth(const ScenarioConfig& config) {
    if (config.n < 1) {
        throw Error(ErrorCode::InvalidArgument, "scenario sample size must be positive");
    }
    RngStream rho_stream(config.generation_seed, 1);
    RngStream effect_stream(config.generation_seed, 2);

    std::vector<double> rho, p0, delta;
    switch (config.regime) {
        case Regime::LARGE: {
            rho = {0.2, 0.3, 0.5};
            large_effect_vectors(config.effect, p0, delta);
            break;
        }
        case Regime::SPARSE: {
            const std::size_t k = static_cast<std::size_t>(sparse_stratum_count(config.n));
            rho.resize(k);
            double sum = 0.0;
            for (auto& r : rho) {
                r = rho_stream.uniform(0.2, 0.5);
                sum += r;
            }
            for (auto& r : rho) r /= sum;
            p0.resize(k);
            delta.resize(k);
            draw_sparse_effects(config.effect, 0, k, p0, delta, effect_stream);
            break;
        }
        case Regime::MIXED: {
            const std::size_t small = static_cast<std::size_t>(mixed_small_count(config.n));
            rho = {0.1, 0.15, 0.25};
            rho.resize(3 + small);
            double sum = 0.0;
            for (std::size_t i = 0; i < small; ++i) {
                rho[3 + i] = rho_stream.uniform(0.2, 0.5);
                sum += rho[3 + i];
            }
            for (std::size_t i = 0; i < small; ++i) rho[3 + i] *= 0.5 / sum;
            std::vector<double> large_p0, large_delta;
            large_effect_vectors(config.effect, large_p0, large_delta);
            p0.assign(3 + small, 0.0);
            delta.assign(3 + small, 0.0);
            for (std::size_t i = 0; i < 3; ++i) {
                p0[i] = large_p0[i];
                delta[i] = large_delta[i];
            }
            draw_sparse_effects(config.effect, 3, small, p0, delta, effect_stream);
            break;
        }
    }
    return make_true_parameters(std::move(rho), config.pi1, std::move(p0),
                                std::move(delta));
}

namespace {

std::vector<double> cumulative(const std::vector<double>& p) {
    std::vector<double> cum(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;
    return cum;
}

struct CellCounts {
    long long n11 = 0, n10 = 0, n01 = 0, n00 = 0;
};

void tally(std::vector<CellCounts>& counts, std::size_t z, int a, int y) {
    CellCounts& c = counts[z];
    if (a == 1) {
        (y == 1 ? c.n11 : c.n01) += 1;
    } else {
        (y == 1 ? c.n10 : c.n00) += 1;
    }
}

// Core binomial-route sampler shared by sample_trial and run_scenario.
void sample_counts(const TrueParameters& truth, int n, std::uint64_t seed,
                   std::vector<CellCounts>& counts,
                   std::vector<SubjectRecord>* records) {
    const std::vector<double> cum = cumulative(truth.rho);
    RngStream rng(seed, 0);
    counts.assign(truth.stratum_count(), CellCounts{});
    for (int i = 0; i < n; ++i) {
        const std::size_t z = rng.categorical(cum);
        const int a = rng.bernoulli(truth.pi1) ? 1 : 0;
        const double p = a == 1 ? truth.p1[z] : truth.p0[z];
        const int y = rng.bernoulli(p) ? 1 : 0;
        tally(counts, z, a, y);
        if (records) records->push_back({"s" + std::to_string(z + 1), a, y});
    }
}

// Potential-outcome route sampler.
void sample_counts_individual(const std::vector<LambdaSpec>& lambdas,
                              const std::vector<double>& rho, double pi1, int n,
                              std::uint64_t seed, std::vector<CellCounts>& counts,
                              std::vector<SubjectRecord>* records) {
    if (lambdas.size() != rho.size() || lambdas.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "lambdas and rho must share length >= 1");
    }
    std::vector<std::vector<double>> class_cum(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const LambdaSpec& l = lambdas[k];
        const double sum = l.rd_minus + l.rd_plus + l.null_00 + l.null_11;
        if (l.rd_minus < 0.0 || l.rd_plus < 0.0 || l.null_00 < 0.0 || l.null_11 < 0.0 ||
            std::fabs(sum - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidLambda,
                        "lambda proportions must be non-negative and sum to 1");
        }
        class_cum[k] = cumulative({l.rd_minus, l.rd_plus, l.null_00, l.null_11});
    }
    const std::vector<double> cum = cumulative(rho);
    RngStream rng(seed, 0);
    counts.assign(rho.size(), CellCounts{});
    for (int i = 0; i < n; ++i) {
        const std::size_t z = rng.categorical(cum);
        const std::size_t cls = rng.categorical(class_cum[z]);
        const int a = rng.bernoulli(pi1) ? 1 : 0;
        int y = 0;
        switch (cls) {
            case 0: y = a == 1 ? 0 : 1; break; // (Y0, Y1) = (1, 0)
            case 1: y = a; break;              // (0, 1)
            case 2: y = 0; break;              // (0, 0)
            default: y = 1; break;             // (1, 1)
        }
        tally(counts, z, a, y);
        if (records) records->push_back({"s" + std::to_string(z + 1), a, y});
    }
}

StratifiedDataset dataset_from_counts(const std::vector<CellCounts>& counts) {
    StratifiedDataset dataset;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const CellCounts& c = counts[k];
        if (c.n11 + c.n10 + c.n01 + c.n00 == 0) continue;
        dataset.strata.push_back(
            {"s" + std::to_string(k + 1), c.n11, c.n10, c.n01, c.n00});
    }
    return dataset;
}

} // namespace

std::vector<SubjectRecord> sample_trial(const TrueParameters& truth, int n,
                                        std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    std::vector<SubjectRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    std::vector<CellCounts> counts;
    sample_counts(truth, n, seed, counts, &records);
    return records;
}

std::vector<SubjectRecord> sample_trial_individual_rd(
    const std::vector<LambdaSpec>& lambdas, const std::vector<double>& rho,
    double pi1, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    std::vector<SubjectRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    std::vector<CellCounts> counts;
    sample_counts_individual(lambdas, rho, pi1, n, seed, counts, &records);
    return records;
}

namespace {

struct ReplicateResult {
    bool delta_mh_ok = false;
    double delta_mh_truth = 0.0;
    bool mh_ok = false;
    double mh = 0.0;
    bool gr_ok = false;
    double gr_var = 0.0;
    bool sato_ok = false;
    double sato_var = 0.0;
    bool mgr_mh_ok = false;
    double mgr_mh_var = 0.0;
    bool mgr_ate_ok = false;
    double mgr_ate_var = 0.0;
    bool boot_ok = false;
    double boot_var = 0.0;
    bool ps_ok = false;
    double ps = 0.0;
    double ps_var = 0.0;
    bool unadj_ok = false;
    double unadj = 0.0;
    double unadj_var = 0.0;
};

ReplicateResult run_replicate(const ScenarioConfig& config, const TrueParameters& truth,
                              const std::vector<LambdaSpec>& lambdas,
                              const MethodSelection& methods, std::uint64_t rep_seed) {
    ReplicateResult r;
    std::vector<CellCounts> counts;
    std::vector<SubjectRecord> records;
    std::vector<SubjectRecord>* record_sink = methods.bootstrap ? &records : nullptr;
    if (config.route == GenerationRoute::INDIVIDUAL_RD ||
        config.effect == EffectPattern::EXTREME) {
        sample_counts_individual(lambdas, truth.rho, truth.pi1, config.n, rep_seed,
                                 counts, record_sink);
    } else {
        sample_counts(truth, config.n, rep_seed, counts, record_sink);
    }

    // Run-varying estimand: realized MH weights, true risk differences.
    double w_sum = 0.0;
    double w_delta = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const CellCounts& c = counts[k];
        const double n1 = static_cast<double>(c.n11 + c.n01);
        const double n0 = static_cast<double>(c.n10 + c.n00);
        if (n1 == 0.0 || n0 == 0.0) continue;
        const double w = n1 * n0 / (n1 + n0);
        w_sum += w;
        w_delta += w * truth.delta[k];
    }
    if (w_sum > 0.0) {
        r.delta_mh_ok = true;
        r.delta_mh_truth = w_delta / w_sum;
    }

    const StratifiedDataset dataset = dataset_from_counts(counts);
    try {
        r.mh = mh_estimate(dataset).value;
        r.mh_ok = true;
    } catch (const Error&) {
        return r;
    }
    if (methods.gr) {
        try {
            r.gr_var = var_gr(dataset).variance;
            r.gr_ok = true;
        } catch (const Error&) {}
    }
    if (methods.sato) {
        try {
            const VarianceEstimate v = var_sato(dataset);
            if (v.variance >= 0.0) {
                r.sato_var = v.variance;
                r.sato_ok = true;
            }
        } catch (const Error&) {}
    }
    if (methods.mgr) {
        try {
            r.mgr_mh_var = var_mgr_mh(dataset).variance;
            r.mgr_mh_ok = true;
        } catch (const Error&) {}
        try {
            r.mgr_ate_var = var_mgr_ate(dataset).reported_variance();
            r.mgr_ate_ok = true;
        } catch (const Error&) {}
    }
    if (methods.bootstrap) {
        try {
            BootstrapOptions opts;
            opts.replicates = methods.bootstrap_replicates;
            opts.seed = derive_stream_seed(rep_seed, 0x626F6F74ULL);
            r.boot_var = var_bootstrap(records, Estimator::MH, opts).variance;
            r.boot_ok = true;
        } catch (const Error&) {}
    }
    if (methods.ps) {
        try {
            r.ps = ps_estimate(dataset).value;
            r.ps_var = var_ps(dataset).reported_variance();
            r.ps_ok = true;
        } catch (const Error&) {}
    }
    if (methods.unadjusted) {
        try {
            r.unadj = unadjusted_estimate(dataset).value;
            r.unadj_var = var_unadjusted(dataset).variance;
            r.unadj_ok = true;
        } catch (const Error&) {}
    }
    return r;
}

struct CellAccumulator {
    CellKey key;
    std::vector<double> estimates;
    std::vector<double> deviations;
    std::vector<double> ses;
    int covered = 0;
    int rejected = 0;
    int failures = 0;
};

void accumulate(CellAccumulator& acc, bool ok, double estimate, double variance,
                bool truth_ok, double truth, double z) {
    if (!ok || !truth_ok || variance < 0.0) {
        ++acc.failures;
        return;
    }
    const double se = std::sqrt(variance);
    const double lower = std::max(-1.0, estimate - z * se);
    const double upper = std::min(1.0, estimate + z * se);
    acc.estimates.push_back(estimate);
    acc.deviations.push_back(estimate - truth);
    acc.ses.push_back(se);
    if (truth >= lower && truth <= upper) ++acc.covered;
    if (lower > 0.0 || upper < 0.0) ++acc.rejected;
}

} // namespace

ScenarioSummary run_scenario(const ScenarioConfig& config, int runs,
                             const MethodSelection& methods, int threads) {
    if (runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
    const TrueParameters truth = build_truth(config);
    std::vector<LambdaSpec> lambdas;
    if (config.route == GenerationRoute::INDIVIDUAL_RD ||
        config.effect == EffectPattern::EXTREME) {
        lambdas.reserve(truth.stratum_count());
        for (std::size_t k = 0; k < truth.stratum_count(); ++k) {
            lambdas.push_back(lambda_from_effects(truth.p0[k], truth.delta[k]));
        }
    }

    std::vector<ReplicateResult> results(static_cast<std::size_t>(runs));
    const int workers = std::max(1, threads);
    if (workers == 1) {
        for (int rep = 0; rep < runs; ++rep) {
            results[static_cast<std::size_t>(rep)] =
                run_replicate(config, truth, lambdas, methods,
                              derive_stream_seed(config.run_seed,
                                                 static_cast<std::uint64_t>(rep)));
        }
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                const int rep = next.fetch_add(1);
                if (rep >= runs) break;
                results[static_cast<std::size_t>(rep)] =
                    run_replicate(config, truth, lambdas, methods,
                                  derive_stream_seed(config.run_seed,
                                                     static_cast<std::uint64_t>(rep)));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const double z = normal_quantile(0.975);
    std::vector<CellAccumulator> cells;
    auto add_cell = [&](Estimator e, VarianceMethod m, Estimand target) {
        cells.push_back({CellKey{e, m, target}, {}, {}, {}, 0, 0, 0});
    };
    if (methods.gr) add_cell(Estimator::MH, VarianceMethod::GR, Estimand::DELTA_MH);
    if (methods.sato) add_cell(Estimator::MH, VarianceMethod::SATO, Estimand::DELTA_MH);
    if (methods.mgr) add_cell(Estimator::MH, VarianceMethod::MGR_MH, Estimand::DELTA_MH);
    if (methods.bootstrap)
        add_cell(Estimator::MH, VarianceMethod::BOOTSTRAP, Estimand::DELTA_MH);
    if (methods.gr) add_cell(Estimator::MH, VarianceMethod::GR, Estimand::DELTA_ATE);
    if (methods.sato) add_cell(Estimator::MH, VarianceMethod::SATO, Estimand::DELTA_ATE);
    if (methods.mgr) add_cell(Estimator::MH, VarianceMethod::MGR_ATE, Estimand::DELTA_ATE);
    if (methods.bootstrap)
        add_cell(Estimator::MH, VarianceMethod::BOOTSTRAP, Estimand::DELTA_ATE);
    if (methods.ps) add_cell(Estimator::PS, VarianceMethod::PS, Estimand::DELTA_ATE);
    if (methods.unadjusted)
        add_cell(Estimator::UNADJUSTED, VarianceMethod::UNADJUSTED, Estimand::DELTA_ATE);

    std::vector<double> mh_truths;
    for (const ReplicateResult& r : results) {
        if (r.delta_mh_ok) mh_truths.push_back(r.delta_mh_truth);
        for (CellAccumulator& acc : cells) {
            const bool vs_mh = acc.key.estimand == Estimand::DELTA_MH;
            const bool truth_ok = vs_mh ? r.delta_mh_ok : true;
            const double target = vs_mh ? r.delta_mh_truth : truth.delta_ate;
            switch (acc.key.estimator) {
                case Estimator::MH: {
                    bool ok = r.mh_ok;
                    double variance = 0.0;
                    switch (acc.key.se_method) {
                        case VarianceMethod::GR: ok = ok && r.gr_ok; variance = r.gr_var; break;
                        case VarianceMethod::SATO: ok = ok && r.sato_ok; variance = r.sato_var; break;
                        case VarianceMethod::MGR_MH: ok = ok && r.mgr_mh_ok; variance = r.mgr_mh_var; break;
                        case VarianceMethod::MGR_ATE: ok = ok && r.mgr_ate_ok; variance = r.mgr_ate_var; break;
                        case VarianceMethod::BOOTSTRAP: ok = ok && r.boot_ok; variance = r.boot_var; break;
                        default: ok = false; break;
                    }
                    accumulate(acc, ok, r.mh, variance, truth_ok, target, z);
                    break;
                }
                case Estimator::PS:
                    accumulate(acc, r.ps_ok, r.ps, r.ps_var, truth_ok, target, z);
                    break;
                case Estimator::UNADJUSTED:
                    accumulate(acc, r.unadj_ok, r.unadj, r.unadj_var, truth_ok, target, z);
                    break;
                case Estimator::MH_MULTIARM:
                    break;
            }
        }
    }

    ScenarioSummary summary;
    summary.scenario_id = config.id;
    summary.runs = runs;
    summary.truth_ate = truth.delta_ate;
    summary.truth_mh_avg = mean(mh_truths);
    for (CellAccumulator& acc : cells) {
        CellSummary cell;
        cell.runs_used = static_cast<int>(acc.estimates.size());
        cell.failures = acc.failures;
        if (cell.runs_used > 0) {
            cell.bias = mean(acc.deviations);
            cell.mean_se = mean(acc.ses);
            cell.cp = static_cast<double>(acc.covered) / cell.runs_used;
            cell.power = static_cast<double>(acc.rejected) / cell.runs_used;
            if (cell.runs_used > 1) {
                cell.sd = std::sqrt(sample_variance(acc.estimates));
                cell.sd_available = true;
            }
        }
        summary.cells.emplace_back(acc.key, cell);
    }
    return summary;
}

std::vector<ScenarioConfig> make_grid(const FactorSelection& selection,
                                      std::uint64_t generation_seed,
                                      std::uint64_t run_seed, GenerationRoute route) {
    static const std::vector<std::string> f1 = {"1a", "1b", "1c"};
    static const std::vector<std::string> f2 = {"2a", "2b"};
    static const std::vector<std::string> f3 = {"3a", "3b", "3c"};
    static const std::vector<std::string> f4 = {"4a", "4b", "4c", "4x"};
    static const int sizes[] = {500, 300, 200};
    static const double pi1s[] = {2.0 / 3.0, 0.5};
    static const Regime regimes[] = {Regime::LARGE, Regime::SPARSE, Regime::MIXED};
    static const EffectPattern effects[] = {EffectPattern::COMMON_4A,
                                            EffectPattern::VARYING_4B,
                                            EffectPattern::VARYING_4C,
                                            EffectPattern::EXTREME};

    std::vector<bool> keep1(3, true), keep2(2, true), keep3(3, true);
    // The extreme scenario is opt-in; the default grid is the 54 factorial
    // scenarios.
    std::vector<bool> keep4 = {true, true, true, false};
    bool saw1 = false, saw2 = false, saw3 = false, saw4 = false;
    auto match = [](const std::vector<std::string>& names, const std::string& token,
                    std::vector<bool>& keep, bool& saw) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == token) {
                if (!saw) {
                    keep.assign(keep.size(), false);
                    saw = true;
                }
                keep[i] = true;
                return true;
            }
        }
        return false;
    };
    for (const std::string& token : selection.tokens) {
        if (match(f1, token, keep1, saw1)) continue;
        if (match(f2, token, keep2, saw2)) continue;
        if (match(f3, token, keep3, saw3)) continue;
        if (match(f4, token, keep4, saw4)) continue;
        throw Error(ErrorCode::InvalidArgument, "unknown factor token '" + token + "'");
    }

    std::vector<ScenarioConfig> grid;
    for (std::size_t i1 = 0; i1 < 3; ++i1) {
        for (std::size_t i2 = 0; i2 < 2; ++i2) {
            for (std::size_t i3 = 0; i3 < 3; ++i3) {
                for (std::size_t i4 = 0; i4 < 4; ++i4) {
                    const std::size_t index = ((i1 * 2 + i2) * 3 + i3) * 4 + i4;
                    if (!keep1[i1] || !keep2[i2] || !keep3[i3] || !keep4[i4]) continue;
                    ScenarioConfig config;
                    config.id = f1[i1] + f2[i2] + f3[i3] + f4[i4];
                    config.n = sizes[i1];
                    config.pi1 = pi1s[i2];
                    config.regime = regimes[i3];
                    config.effect = effects[i4];
                    config.route = config.effect == EffectPattern::EXTREME
                                       ? GenerationRoute::INDIVIDUAL_RD
                                       : route;
                    config.generation_seed = derive_stream_seed(generation_seed, index);
                    config.run_seed = derive_stream_seed(run_seed, index);
                    grid.push_back(std::move(config));
                }
            }
        }
    }
    return grid;
}

} // namespace stratrd
