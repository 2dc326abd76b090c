#include "stratrd/tables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace stratrd {

long long StratifiedDataset::total_subjects() const {
    long long n = 0;
    for (const auto& s : strata) n += s.total();
    return n;
}

long long MultiArmStratumTable::total() const {
    long long n = 0;
    for (long long t : totals) n += t;
    return n;
}

void check_dataset(const StratifiedDataset& dataset) {
    if (dataset.strata.empty()) {
        throw Error(ErrorCode::EmptyInput, "dataset has no strata");
    }
    for (const auto& s : dataset.strata) {
        if (s.n11 < 0 || s.n10 < 0 || s.n01 < 0 || s.n00 < 0) {
            throw Error(ErrorCode::ParseError,
                        "negative cell count in stratum '" + s.label + "'");
        }
        if (s.total() == 0) {
            throw Error(ErrorCode::EmptyStratum,
                        "stratum '" + s.label + "' has no subjects");
        }
    }
}

StratifiedDataset aggregate_subjects(std::span<const SubjectRecord> records) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, "no subject records");
    }
    StratifiedDataset dataset;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& r : records) {
        if (r.arm != 0 && r.arm != 1) {
            throw Error(ErrorCode::InvalidArm,
                        "arm must be 0 or 1 in two-arm mode, got " + std::to_string(r.arm));
        }
        if (r.outcome != 0 && r.outcome != 1) {
            throw Error(ErrorCode::InvalidOutcome,
                        "outcome must be 0 or 1, got " + std::to_string(r.outcome));
        }
        auto [it, inserted] = index.try_emplace(r.stratum, dataset.strata.size());
        if (inserted) dataset.strata.push_back(StratumTable{r.stratum, 0, 0, 0, 0});
        StratumTable& t = dataset.strata[it->second];
        if (r.arm == 1) {
            (r.outcome == 1 ? t.n11 : t.n01) += 1;
        } else {
            (r.outcome == 1 ? t.n10 : t.n00) += 1;
        }
    }
    return dataset;
}

std::vector<MultiArmStratumTable> aggregate_subjects_multiarm(
    std::span<const SubjectRecord> records, int arm_count) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, "no subject records");
    }
    int max_arm = 0;
    for (const auto& r : records) {
        if (r.arm < 0) {
            throw Error(ErrorCode::InvalidArm, "arm index must be non-negative");
        }
        if (r.outcome != 0 && r.outcome != 1) {
            throw Error(ErrorCode::InvalidOutcome, "outcome must be 0 or 1");
        }
        max_arm = std::max(max_arm, r.arm);
    }
    const int arms = arm_count > 0 ? arm_count : max_arm + 1;
    if (arms < 2 || max_arm >= arms) {
        throw Error(ErrorCode::InvalidArm,
                    "arm index " + std::to_string(max_arm) + " outside 0.." +
                        std::to_string(arms - 1));
    }
    std::vector<MultiArmStratumTable> tables;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& r : records) {
        auto [it, inserted] = index.try_emplace(r.stratum, tables.size());
        if (inserted) {
            MultiArmStratumTable t;
            t.label = r.stratum;
            t.responders.assign(static_cast<std::size_t>(arms), 0);
            t.totals.assign(static_cast<std::size_t>(arms), 0);
            tables.push_back(std::move(t));
        }
        MultiArmStratumTable& t = tables[it->second];
        t.totals[static_cast<std::size_t>(r.arm)] += 1;
        if (r.outcome == 1) t.responders[static_cast<std::size_t>(r.arm)] += 1;
    }
    return tables;
}

std::vector<SubjectRecord> expand_to_records(const StratifiedDataset& dataset) {
    std::vector<SubjectRecord> records;
    records.reserve(static_cast<std::size_t>(dataset.total_subjects()));
    for (const auto& s : dataset.strata) {
        auto emit = [&](long long count, int arm, int outcome) {
            for (long long i = 0; i < count; ++i) records.push_back({s.label, arm, outcome});
        };
        emit(s.n11, 1, 1);
        emit(s.n01, 1, 0);
        emit(s.n10, 0, 1);
        emit(s.n00, 0, 0);
    }
    return records;
}

std::vector<Warning> validate(const StratifiedDataset& dataset, unsigned checks) {
    check_dataset(dataset);
    std::vector<Warning> warnings;
    std::size_t zero_arm = 0;
    for (const auto& s : dataset.strata) {
        const long long n1 = s.treated_total();
        const long long n0 = s.control_total();
        if (n1 == 0 || n0 == 0) {
            ++zero_arm;
            if (checks & kCheckZeroArm) {
                warnings.push_back({WarningCode::ZeroArmStratum,
                                    "stratum '" + s.label +
                                        "' has an empty arm and is dropped by MH/PS weighting"});
            }
        } else if ((checks & kCheckSingleSubjectArm) && (n1 == 1 || n0 == 1)) {
            warnings.push_back({WarningCode::SingleSubjectArm,
                                "stratum '" + s.label +
                                    "' has a single-subject arm; finite-sample correction "
                                    "degenerates to 1"});
        }
    }
    if ((checks & kCheckAllDegenerate) && zero_arm == dataset.strata.size()) {
        warnings.push_back({WarningCode::AllStrataZeroArm,
                            "every stratum has an empty arm; no estimator is defined"});
    }
    return warnings;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

long long parse_count(const std::string& text, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const long long value = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
    }
}

} // namespace

std::vector<SubjectRecord> read_subject_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "empty file");
    }
    ++line_no;
    if (split_csv_line(line) != std::vector<std::string>{"stratum", "arm", "outcome"}) {
        throw Error(ErrorCode::ParseError, "line 1: expected header 'stratum,arm,outcome'");
    }
    std::vector<SubjectRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        SubjectRecord r;
        r.stratum = fields[0];
        r.arm = static_cast<int>(parse_count(fields[1], line_no, "arm"));
        r.outcome = static_cast<int>(parse_count(fields[2], line_no, "outcome"));
        records.push_back(std::move(r));
    }
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, "no subject rows");
    }
    return records;
}

StratifiedDataset read_aggregated_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "empty file");
    }
    ++line_no;
    if (split_csv_line(line) !=
        std::vector<std::string>{"stratum", "n11", "n10", "n01", "n00"}) {
        throw Error(ErrorCode::ParseError,
                    "line 1: expected header 'stratum,n11,n10,n01,n00'");
    }
    StratifiedDataset dataset;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected 5 fields, got " +
                            std::to_string(fields.size()));
        }
        StratumTable t;
        t.label = fields[0];
        t.n11 = parse_count(fields[1], line_no, "n11");
        t.n10 = parse_count(fields[2], line_no, "n10");
        t.n01 = parse_count(fields[3], line_no, "n01");
        t.n00 = parse_count(fields[4], line_no, "n00");
        dataset.strata.push_back(std::move(t));
    }
    check_dataset(dataset);
    return dataset;
}

void write_aggregated_csv(std::ostream& out, const StratifiedDataset& dataset) {
    out << "stratum,n11,n10,n01,n00\n";
    for (const auto& s : dataset.strata) {
        out << s.label << ',' << s.n11 << ',' << s.n10 << ',' << s.n01 << ',' << s.n00
            << '\n';
    }
}

namespace {

// Published CALGB multiple-myeloma trial summary: per-institution
// treated/control sizes and response proportions.
constexpr std::array<CalgbRow, 21> kCalgb = {{
    {"1", 4, 0.75, 3, 0.33},  {"2", 4, 0.75, 11, 0.73}, {"3", 2, 1.00, 3, 0.67},
    {"4", 2, 1.00, 2, 1.00},  {"5", 2, 1.00, 3, 0.00},  {"6", 3, 0.33, 3, 0.67},
    {"7", 2, 1.00, 3, 0.67},  {"8", 5, 0.20, 4, 1.00},  {"9", 2, 1.00, 3, 0.67},
    {"10", 2, 0.00, 3, 0.67}, {"11", 3, 1.00, 3, 1.00}, {"12", 2, 1.00, 2, 0.00},
    {"13", 4, 0.25, 5, 0.20}, {"14", 3, 0.67, 4, 0.50}, {"15", 4, 0.50, 6, 0.67},
    {"16", 12, 0.33, 9, 0.33}, {"17", 2, 0.50, 3, 0.67}, {"18", 3, 1.00, 4, 0.25},
    {"19", 4, 0.25, 3, 0.67}, {"20", 3, 0.00, 2, 0.00}, {"21", 4, 0.50, 5, 0.20},
}};

long long reconstruct_cell(long long arm_total, double proportion, const char* institution) {
    const long long count = std::llround(static_cast<double>(arm_total) * proportion);
    const double implied = static_cast<double>(count) / static_cast<double>(arm_total);
    if (std::fabs(implied - proportion) > 0.02) {
        throw Error(ErrorCode::BadCellReconstruction,
                    std::string("institution ") + institution +
                        ": no integer cell count reproduces the published proportion");
    }
    return count;
}

} // namespace

std::span<const CalgbRow> calgb_rows() { return kCalgb; }

StratifiedDataset calgb_dataset() {
    StratifiedDataset dataset;
    for (const auto& row : kCalgb) {
        StratumTable t;
        t.label = row.institution;
        t.n11 = reconstruct_cell(row.n_treated, row.p_treated, row.institution);
        t.n10 = reconstruct_cell(row.n_control, row.p_control, row.institution);
        t.n01 = row.n_treated - t.n11;
        t.n00 = row.n_control - t.n10;
        dataset.strata.push_back(std::move(t));
    }
    check_dataset(dataset);
    return dataset;
}

std::vector<SubjectRecord> calgb_records() {
    return expand_to_records(calgb_dataset());
}

} // namespace stratrd
