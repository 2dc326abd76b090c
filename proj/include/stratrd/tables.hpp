#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stratrd/errors.hpp"

namespace stratrd {

// One subject: stratum label, treatment arm (0 = control, 1 = treated;
// higher indices only in multi-arm mode), binary outcome (1 = responder).
struct SubjectRecord {
    std::string stratum;
    int arm = 0;
    int outcome = 0;

    bool operator==(const SubjectRecord&) const = default;
};

// 2x2 cell counts for one stratum.
//
//                    Treated   Control
//   Responder          n11       n10
//   Non-responder      n01       n00
struct StratumTable {
    std::string label;
    long long n11 = 0;
    long long n10 = 0;
    long long n01 = 0;
    long long n00 = 0;

    long long treated_total() const { return n11 + n01; }        // n_.1
    long long control_total() const { return n10 + n00; }        // n_.0
    long long responder_total() const { return n11 + n10; }      // n_1.
    long long nonresponder_total() const { return n01 + n00; }   // n_0.
    long long total() const { return n11 + n10 + n01 + n00; }    // n_..

    bool operator==(const StratumTable&) const = default;
};

// Ordered stratified dataset. Stratum order is stable: it follows input
// order and never gets re-sorted.
struct StratifiedDataset {
    std::vector<StratumTable> strata;

    std::size_t stratum_count() const { return strata.size(); }
    long long total_subjects() const;

    bool operator==(const StratifiedDataset&) const = default;
};

// Per-arm responder counts n_{1jk} and totals n_{.jk} for a 2xJ stratum.
struct MultiArmStratumTable {
    std::string label;
    std::vector<long long> responders;
    std::vector<long long> totals;

    std::size_t arm_count() const { return totals.size(); }
    long long total() const;
};

// Checks cell non-negativity and rejects all-zero strata. Throws on
// violation; used by every constructor-like path.
void check_dataset(const StratifiedDataset& dataset);

// Builds one StratumTable per distinct stratum label, ordered by first
// appearance. Arms must be in {0, 1}.
StratifiedDataset aggregate_subjects(std::span<const SubjectRecord> records);

// Multi-arm variant: one 2xJ table per stratum, J inferred as max arm + 1
// unless forced via `arm_count`.
std::vector<MultiArmStratumTable> aggregate_subjects_multiarm(
    std::span<const SubjectRecord> records, int arm_count = -1);

// Inverse of aggregate_subjects up to record order.
std::vector<SubjectRecord> expand_to_records(const StratifiedDataset& dataset);

enum ValidationChecks : unsigned {
    kCheckZeroArm = 1u << 0,
    kCheckSingleSubjectArm = 1u << 1,
    kCheckAllDegenerate = 1u << 2,
    kCheckAll = kCheckZeroArm | kCheckSingleSubjectArm | kCheckAllDegenerate,
};

// Advisory pass: flags strata that estimators will drop (zero arm), strata
// where the finite-sample correction degenerates (single-subject arm), and
// datasets no estimator can handle (every stratum has a zero arm). Never
// throws; hard failures belong to the estimators.
std::vector<Warning> validate(const StratifiedDataset& dataset,
                              unsigned checks = kCheckAll);

// --- CSV interfaces -------------------------------------------------------

// Subject-level CSV, header `stratum,arm,outcome`, one row per subject.
std::vector<SubjectRecord> read_subject_csv(std::istream& in);

// Aggregated CSV, header `stratum,n11,n10,n01,n00`.
StratifiedDataset read_aggregated_csv(std::istream& in);

void write_aggregated_csv(std::ostream& out, const StratifiedDataset& dataset);

// --- Embedded CALGB trial data -------------------------------------------

// One row of the published CALGB summary: treated/control sizes and
// response proportions per institution.
struct CalgbRow {
    const char* institution;
    long long n_treated;
    double p_treated;
    long long n_control;
    double p_control;
};

std::span<const CalgbRow> calgb_rows();

// Reconstructs cell counts from the published (size, proportion) pairs:
// n11k = round(n_.1k * p1k), n10k = round(n_.0k * p0k). Ingestion fails
// unless the reconstructed proportion matches the published one within
// 0.02 (two-decimal published values leave at most 0.005).
StratifiedDataset calgb_dataset();

std::vector<SubjectRecord> calgb_records();

} // namespace stratrd
