#include "stratrd/variance.hpp"

#include <cmath>
#include <string>

#include "stratrd/mathutil.hpp"
#include "stratrd/rng.hpp"

namespace stratrd {

const char* variance_method_name(VarianceMethod m) {
    switch (m) {
        case VarianceMethod::GR: return "gr";
        case VarianceMethod::SATO: return "sato";
        case VarianceMethod::MGR_MH: return "mgr_mh";
        case VarianceMethod::MGR_ATE: return "mgr_ate";
        case VarianceMethod::PS: return "ps";
        case VarianceMethod::BOOTSTRAP: return "bootstrap";
        case VarianceMethod::UNADJUSTED: return "unadjusted";
    }
    return "unknown";
}

const char* estimand_name(Estimand e) {
    return e == Estimand::DELTA_MH ? "delta_mh" : "delta_ate";
}

TrueParameters make_true_parameters(std::vector<double> rho, double pi1,
                                    std::vector<double> p0,
                                    std::vector<double> delta) {
    const std::size_t k = rho.size();
    if (p0.size() != k || delta.size() != k || k == 0) {
        throw Error(ErrorCode::DimensionMismatch, "rho, p0, delta must share length >= 1");
    }
    if (!(pi1 > 0.0 && pi1 < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "pi1 must lie in (0, 1)");
    }
    TrueParameters truth;
    truth.pi1 = pi1;
    truth.pi0 = 1.0 - pi1;
    truth.rho = std::move(rho);
    truth.p0 = std::move(p0);
    truth.delta = std::move(delta);
    truth.p1.resize(k);
    double rho_sum = 0.0;
    double ate = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(truth.rho[i] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "rho_k must be positive");
        }
        truth.p1[i] = truth.p0[i] + truth.delta[i];
        if (truth.p0[i] < 0.0 || truth.p0[i] > 1.0 || truth.p1[i] < -1e-12 ||
            truth.p1[i] > 1.0 + 1e-12) {
            throw Error(ErrorCode::InfeasibleProbability,
                        "p_{ak} outside [0, 1] in stratum " + std::to_string(i + 1));
        }
        truth.p1[i] = std::min(1.0, std::max(0.0, truth.p1[i]));
        rho_sum += truth.rho[i];
        ate += truth.rho[i] * truth.delta[i];
    }
    if (std::fabs(rho_sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "rho must sum to 1");
    }
    truth.delta_ate = ate;
    return truth;
}

namespace {

struct Margins {
    double n1, n0, nn;     // n_.1k, n_.0k, n_..k
    double n11, n10, n01, n00;
    bool included;         // n_.1k * n_.0k != 0
    double w;              // MH weight, 0 when excluded
};

Margins margins_of(const StratumTable& s) {
    Margins m;
    m.n1 = static_cast<double>(s.treated_total());
    m.n0 = static_cast<double>(s.control_total());
    m.nn = static_cast<double>(s.total());
    m.n11 = static_cast<double>(s.n11);
    m.n10 = static_cast<double>(s.n10);
    m.n01 = static_cast<double>(s.n01);
    m.n00 = static_cast<double>(s.n00);
    m.included = (m.n1 > 0.0 && m.n0 > 0.0);
    m.w = m.included ? m.n1 * m.n0 / m.nn : 0.0;
    return m;
}

double mh_weight_sum(const StratifiedDataset& dataset) {
    double sum = 0.0;
    for (const auto& s : dataset.strata) sum += margins_of(s).w;
    if (sum == 0.0) {
        throw Error(ErrorCode::AllStrataDegenerate,
                    "every stratum has an empty arm; MH weight sum is zero");
    }
    return sum;
}

// Finite-sample correction (n / (n - 1))^{I(n > 1)}.
double correction(double n) { return n > 1.0 ? n / (n - 1.0) : 1.0; }

// Per-arm sample variance of binary outcomes: n * p(1-p) / (n - 1).
double binary_sample_variance(double count, double total) {
    if (total <= 1.0) return 0.0;
    const double p = count / total;
    return total * p * (1.0 - p) / (total - 1.0);
}

// Estimated average A_k and B_k of Sato's two representations of
// var(w_k (delta_k_hat - delta) | T_k).
double common_form_a(const Margins& m, double delta_mh) {
    return (delta_mh * (m.n0 * m.n0 * m.n01 - m.n1 * m.n1 * m.n00) +
            m.n0 * m.n10 * m.n01 + m.n1 * m.n11 * m.n00) /
           (m.nn * m.nn);
}

double common_form_b(const Margins& m, double delta_mh) {
    return (delta_mh * (m.n1 * m.n1 * m.n10 - m.n0 * m.n0 * m.n11) +
            m.n0 * m.n11 * m.n00 + m.n1 * m.n10 * m.n01) /
           (m.nn * m.nn);
}

// Direct GR per-stratum term; also the value of the common form at
// lambda_{k,GR}, including at n_.0k = n_.1k where lambda is undefined.
double gr_term(const Margins& m) {
    return (m.n11 * m.n01 * m.n0 * m.n0 * m.n0 + m.n10 * m.n00 * m.n1 * m.n1 * m.n1) /
           (m.n1 * m.n0 * m.nn * m.nn);
}

} // namespace

VarianceEstimate var_gr(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double w_sum = mh_weight_sum(dataset);
    double sum = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        if (!m.included) continue;
        sum += gr_term(m);
    }
    VarianceEstimate out;
    out.variance = sum / (w_sum * w_sum);
    out.method = VarianceMethod::GR;
    out.estimand = Estimand::DELTA_MH;
    return out;
}

VarianceEstimate var_sato(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double w_sum = mh_weight_sum(dataset);
    const double delta = mh_estimate(dataset).value;
    double p_sum = 0.0;
    double q_sum = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        p_sum += (m.n1 * m.n1 * m.n10 - m.n0 * m.n0 * m.n11 +
                  0.5 * m.n1 * m.n0 * (m.n0 - m.n1)) /
                 (m.nn * m.nn);
        q_sum += (m.n11 * (m.n0 - m.n10) + m.n10 * (m.n1 - m.n11)) / (2.0 * m.nn);
    }
    VarianceEstimate out;
    out.variance = (delta * p_sum + q_sum) / (w_sum * w_sum);
    out.method = VarianceMethod::SATO;
    out.estimand = Estimand::DELTA_MH;
    if (out.variance < 0.0) {
        out.warnings.push_back({WarningCode::NegativeVariance,
                                "Sato variance estimate is negative"});
    }
    return out;
}

VarianceEstimate var_common_form(const StratifiedDataset& dataset, LambdaRule rule) {
    check_dataset(dataset);
    const double w_sum = mh_weight_sum(dataset);
    const double delta = mh_estimate(dataset).value;
    double sum = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        if (rule == LambdaRule::SATO_HALF) {
            sum += 0.5 * common_form_a(m, delta) + 0.5 * common_form_b(m, delta);
            continue;
        }
        if (!m.included) continue;
        if (m.n0 == m.n1) {
            // lambda_{k,GR} divides by n_.0k - n_.1k; the identity's closed
            // form has no such division, so use it directly.
            sum += gr_term(m);
        } else {
            const double lambda =
                (m.n0 * m.n11 / m.n1 - m.n1 * m.n10 / m.n0) / (m.n0 - m.n1);
            sum += lambda * common_form_a(m, delta) +
                   (1.0 - lambda) * common_form_b(m, delta);
        }
    }
    VarianceEstimate out;
    out.variance = sum / (w_sum * w_sum);
    out.method = rule == LambdaRule::SATO_HALF ? VarianceMethod::SATO : VarianceMethod::GR;
    out.estimand = Estimand::DELTA_MH;
    if (out.variance < 0.0) {
        out.warnings.push_back({WarningCode::NegativeVariance,
                                "common-form variance estimate is negative"});
    }
    return out;
}

VarianceEstimate var_mgr_mh(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double w_sum = mh_weight_sum(dataset);
    double sum = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        if (!m.included) continue;
        const double arm1 = m.n11 * m.n01 / (m.n1 * m.n1 * m.n1) * correction(m.n1);
        const double arm0 = m.n10 * m.n00 / (m.n0 * m.n0 * m.n0) * correction(m.n0);
        sum += m.w * m.w * (arm1 + arm0);
    }
    VarianceEstimate out;
    out.variance = sum / (w_sum * w_sum);
    out.method = VarianceMethod::MGR_MH;
    out.estimand = Estimand::DELTA_MH;
    return out;
}

VarianceEstimate var_mgr_ate(const StratifiedDataset& dataset) {
    const VarianceEstimate sigma = var_mgr_mh(dataset);
    const double n = static_cast<double>(dataset.total_subjects());
    const double delta = mh_estimate(dataset).value;

    double treated = 0.0;
    double control = 0.0;
    for (const auto& s : dataset.strata) {
        treated += static_cast<double>(s.treated_total());
        control += static_cast<double>(s.control_total());
    }
    const double pi1 = treated / n;
    const double pi0 = control / n;

    double w_sum = 0.0;
    double num = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        w_sum += m.w;
        if (!m.included) continue;
        const double p1 = m.n11 / m.n1;
        const double p0 = m.n10 / m.n0;
        const double dk = p1 - p0;
        const double s1 = binary_sample_variance(m.n11, m.n1);
        const double s0 = binary_sample_variance(m.n10, m.n0);
        // Unbiased estimator of delta_k^2; the per-arm S^2/n terms drop when
        // the arm has a single subject.
        const double dk2 = p1 * p1 - (m.n1 > 1.0 ? s1 / m.n1 : 0.0) +
                           p0 * p0 - (m.n0 > 1.0 ? s0 / m.n0 : 0.0) - 2.0 * p1 * p0;
        const double centered = dk2 - 2.0 * dk * delta + delta * delta;
        const double rho_k = m.nn / n;
        num += centered * pi1 * pi0 * ((m.nn - 1.0) / m.nn) *
                   ((m.nn - 1.0 - (4.0 * m.nn - 6.0) * pi1 * pi0) / n) +
               pi1 * pi1 * pi0 * pi0 * rho_k * (dk2 - delta * delta);
    }
    const double mean_w = w_sum / n;
    const double nu2 = (num / n) / (mean_w * mean_w);

    VarianceEstimate out;
    out.variance = sigma.variance + nu2;
    out.method = VarianceMethod::MGR_ATE;
    out.estimand = Estimand::DELTA_ATE;
    out.components = {sigma.variance, nu2};
    if (nu2 < 0.0) {
        out.warnings.push_back({WarningCode::NegativeNu2,
                                "heterogeneity component nu2 is negative; reported "
                                "variance floored at sigma2"});
    }
    return out;
}

VarianceEstimate var_ps(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double n = static_cast<double>(dataset.total_subjects());
    const double delta_ps = ps_estimate(dataset).value;
    double sigma2 = 0.0;
    double inner = 0.0;
    for (const auto& s : dataset.strata) {
        const Margins m = margins_of(s);
        if (!m.included) continue;
        const double y1 = m.n11 / m.n1;
        const double y0 = m.n10 / m.n0;
        const double v1 = m.n1 > 1.0 ? binary_sample_variance(m.n11, m.n1) / m.n1 : 0.0;
        const double v0 = m.n0 > 1.0 ? binary_sample_variance(m.n10, m.n0) / m.n0 : 0.0;
        sigma2 += (m.nn * m.nn) / (n * n) * (v1 + v0);
        inner += m.nn / n * (y1 * y1 - v1 + y0 * y0 - v0 - 2.0 * y1 * y0);
    }
    const double nu2 = (inner - delta_ps * delta_ps) / n;
    VarianceEstimate out;
    out.variance = sigma2 + nu2;
    out.method = VarianceMethod::PS;
    out.estimand = Estimand::DELTA_ATE;
    out.components = {sigma2, nu2};
    if (nu2 < 0.0) {
        out.warnings.push_back({WarningCode::NegativeNu2,
                                "heterogeneity component nu2_PS is negative; reported "
                                "variance floored at sigma2"});
    }
    return out;
}

VarianceEstimate var_unadjusted(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    double treated = 0.0, treated_responders = 0.0;
    double control = 0.0, control_responders = 0.0;
    for (const auto& s : dataset.strata) {
        treated += static_cast<double>(s.treated_total());
        treated_responders += static_cast<double>(s.n11);
        control += static_cast<double>(s.control_total());
        control_responders += static_cast<double>(s.n10);
    }
    if (treated == 0.0 || control == 0.0) {
        throw Error(ErrorCode::EmptyArm, "a pooled arm has zero subjects");
    }
    const double s1 = binary_sample_variance(treated_responders, treated);
    const double s0 = binary_sample_variance(control_responders, control);
    VarianceEstimate out;
    out.variance = s1 / treated + s0 / control;
    out.method = VarianceMethod::UNADJUSTED;
    out.estimand = Estimand::DELTA_ATE;
    return out;
}

VarianceEstimate var_bootstrap(std::span<const SubjectRecord> records,
                               Estimator estimator, const BootstrapOptions& options) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, "no subject records");
    }
    if (options.replicates < 2) {
        throw Error(ErrorCode::InvalidArgument, "bootstrap needs B >= 2");
    }
    const std::size_t n = records.size();
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(options.replicates));
    int failed = 0;
    std::vector<SubjectRecord> resample(n);
    for (int b = 0; b < options.replicates; ++b) {
        RngStream rng(options.seed, static_cast<std::uint64_t>(b));
        for (std::size_t i = 0; i < n; ++i) resample[i] = records[rng.uniform_index(n)];
        try {
            const StratifiedDataset dataset = aggregate_subjects(resample);
            double value = 0.0;
            switch (estimator) {
                case Estimator::MH: value = mh_estimate(dataset).value; break;
                case Estimator::PS: value = ps_estimate(dataset).value; break;
                case Estimator::UNADJUSTED: value = unadjusted_estimate(dataset).value; break;
                case Estimator::MH_MULTIARM:
                    throw Error(ErrorCode::InvalidArgument,
                                "bootstrap supports two-arm estimators only");
            }
            estimates.push_back(value);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InvalidArgument) throw;
            ++failed;
        }
    }
    if (estimates.size() < 2) {
        throw Error(ErrorCode::TooFewValidReplicates,
                    "fewer than 2 bootstrap replicates succeeded");
    }
    VarianceEstimate out;
    out.variance = sample_variance(estimates);
    out.method = VarianceMethod::BOOTSTRAP;
    out.estimand = Estimand::DELTA_ATE;
    out.failed_replicates = failed;
    if (failed > 0) {
        out.warnings.push_back({WarningCode::ZeroArmStratum,
                                std::to_string(failed) + " bootstrap replicate(s) skipped"});
    }
    return out;
}

namespace {

void check_truth_margins(const StratifiedDataset& margins, const TrueParameters& truth) {
    check_dataset(margins);
    if (margins.strata.size() != truth.stratum_count()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "margins have " + std::to_string(margins.strata.size()) +
                        " strata, truth has " + std::to_string(truth.stratum_count()));
    }
}

} // namespace

double theoretical_sigma2(const StratifiedDataset& margins, const TrueParameters& truth) {
    check_truth_margins(margins, truth);
    double w_sum = 0.0;
    double num = 0.0;
    for (std::size_t k = 0; k < margins.strata.size(); ++k) {
        const Margins m = margins_of(margins.strata[k]);
        w_sum += m.w;
        if (!m.included) continue;
        const double v1 = truth.p1[k] * (1.0 - truth.p1[k]) / m.n1;
        const double v0 = truth.p0[k] * (1.0 - truth.p0[k]) / m.n0;
        num += m.w * m.w * (v1 + v0);
    }
    if (w_sum == 0.0) {
        throw Error(ErrorCode::AllStrataDegenerate, "MH weight sum is zero");
    }
    return num / (w_sum * w_sum);
}

double theoretical_nu2(const StratifiedDataset& margins, const TrueParameters& truth) {
    check_truth_margins(margins, truth);
    const double n = static_cast<double>(margins.total_subjects());
    const double pi1 = truth.pi1;
    const double pi0 = truth.pi0;
    double w_sum = 0.0;
    double num = 0.0;
    for (std::size_t k = 0; k < margins.strata.size(); ++k) {
        const Margins m = margins_of(margins.strata[k]);
        w_sum += m.w;
        const double dev = truth.delta[k] - truth.delta_ate;
        num += dev * dev * pi1 * pi0 * ((m.nn - 1.0) / m.nn) *
                   ((m.nn - 1.0 - (4.0 * m.nn - 6.0) * pi1 * pi0) / n) +
               pi1 * pi1 * pi0 * pi0 * truth.rho[k] *
                   (truth.delta[k] * truth.delta[k] - truth.delta_ate * truth.delta_ate);
    }
    if (w_sum == 0.0) {
        throw Error(ErrorCode::AllStrataDegenerate, "MH weight sum is zero");
    }
    const double mean_w = w_sum / n;
    return (num / n) / (mean_w * mean_w);
}

ConfidenceInterval confidence_interval(const PointEstimate& estimate,
                                       const VarianceEstimate& variance,
                                       double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
    }
    const double var = variance.reported_variance();
    if (var < 0.0) {
        throw Error(ErrorCode::NegativeVariance,
                    "negative variance has no Wald interval");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(var);
    ConfidenceInterval ci;
    ci.lower = std::max(-1.0, estimate.value - half);
    ci.upper = std::min(1.0, estimate.value + half);
    ci.level = level;
    return ci;
}

} // namespace stratrd
