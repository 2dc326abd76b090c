#include "stratrd/estimators.hpp"

namespace stratrd {

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::MH: return "mh";
        case Estimator::PS: return "ps";
        case Estimator::UNADJUSTED: return "unadjusted";
        case Estimator::MH_MULTIARM: return "mh_multiarm";
    }
    return "unknown";
}

std::vector<StratumEffect> stratum_effects(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double n = static_cast<double>(dataset.total_subjects());
    std::vector<StratumEffect> effects;
    effects.reserve(dataset.strata.size());
    for (const auto& s : dataset.strata) {
        StratumEffect e;
        e.label = s.label;
        const double n1 = static_cast<double>(s.treated_total());
        const double n0 = static_cast<double>(s.control_total());
        const double nn = static_cast<double>(s.total());
        e.weight_ps = nn / n;
        e.included = (n1 > 0.0 && n0 > 0.0);
        if (e.included) {
            e.weight_mh = n1 * n0 / nn;
            e.p1_hat = static_cast<double>(s.n11) / n1;
            e.p0_hat = static_cast<double>(s.n10) / n0;
            e.delta_hat = *e.p1_hat - *e.p0_hat;
        }
        effects.push_back(std::move(e));
    }
    return effects;
}

PointEstimate mh_estimate(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    double num = 0.0;
    double den = 0.0;
    int used = 0;
    for (const auto& s : dataset.strata) {
        const double n1 = static_cast<double>(s.treated_total());
        const double n0 = static_cast<double>(s.control_total());
        if (n1 == 0.0 || n0 == 0.0) continue;
        const double w = n1 * n0 / static_cast<double>(s.total());
        const double delta = static_cast<double>(s.n11) / n1 - static_cast<double>(s.n10) / n0;
        num += w * delta;
        den += w;
        ++used;
    }
    if (den == 0.0) {
        throw Error(ErrorCode::AllStrataDegenerate,
                    "every stratum has an empty arm; MH weight sum is zero");
    }
    return {num / den, Estimator::MH, used,
            static_cast<int>(dataset.strata.size()) - used};
}

PointEstimate ps_estimate(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    const double n = static_cast<double>(dataset.total_subjects());
    double value = 0.0;
    int used = 0;
    for (const auto& s : dataset.strata) {
        const double n1 = static_cast<double>(s.treated_total());
        const double n0 = static_cast<double>(s.control_total());
        if (n1 == 0.0 || n0 == 0.0) continue;
        const double delta = static_cast<double>(s.n11) / n1 - static_cast<double>(s.n10) / n0;
        value += static_cast<double>(s.total()) / n * delta;
        ++used;
    }
    if (used == 0) {
        throw Error(ErrorCode::AllStrataDegenerate,
                    "every stratum has an empty arm; PS estimator undefined");
    }
    return {value, Estimator::PS, used,
            static_cast<int>(dataset.strata.size()) - used};
}

PointEstimate unadjusted_estimate(const StratifiedDataset& dataset) {
    check_dataset(dataset);
    long long treated = 0, treated_responders = 0;
    long long control = 0, control_responders = 0;
    for (const auto& s : dataset.strata) {
        treated += s.treated_total();
        treated_responders += s.n11;
        control += s.control_total();
        control_responders += s.n10;
    }
    if (treated == 0 || control == 0) {
        throw Error(ErrorCode::EmptyArm, "a pooled arm has zero subjects");
    }
    const double value = static_cast<double>(treated_responders) / static_cast<double>(treated) -
                         static_cast<double>(control_responders) / static_cast<double>(control);
    return {value, Estimator::UNADJUSTED, static_cast<int>(dataset.strata.size()), 0};
}

PointEstimate mh_estimate_pair(const std::vector<MultiArmStratumTable>& strata,
                               int arm_j, int arm_l) {
    if (strata.empty()) {
        throw Error(ErrorCode::EmptyInput, "no strata");
    }
    if (arm_j == arm_l) {
        throw Error(ErrorCode::SameArm, "arms j and l must differ");
    }
    const std::size_t arms = strata.front().arm_count();
    if (arm_j < 0 || arm_l < 0 || static_cast<std::size_t>(arm_j) >= arms ||
        static_cast<std::size_t>(arm_l) >= arms) {
        throw Error(ErrorCode::InvalidArm, "arm index out of range");
    }
    double num = 0.0;
    double den = 0.0;
    int used = 0;
    for (const auto& s : strata) {
        if (s.arm_count() != arms) {
            throw Error(ErrorCode::DimensionMismatch,
                        "arm count differs across strata");
        }
        const double nj = static_cast<double>(s.totals[static_cast<std::size_t>(arm_j)]);
        const double nl = static_cast<double>(s.totals[static_cast<std::size_t>(arm_l)]);
        if (nj == 0.0 || nl == 0.0) continue;
        const double w = nj * nl / static_cast<double>(s.total());
        const double delta =
            static_cast<double>(s.responders[static_cast<std::size_t>(arm_j)]) / nj -
            static_cast<double>(s.responders[static_cast<std::size_t>(arm_l)]) / nl;
        num += w * delta;
        den += w;
        ++used;
    }
    if (den == 0.0) {
        throw Error(ErrorCode::AllStrataDegenerate,
                    "no stratum has subjects in both requested arms");
    }
    return {num / den, Estimator::MH_MULTIARM, used,
            static_cast<int>(strata.size()) - used};
}

} // namespace stratrd
