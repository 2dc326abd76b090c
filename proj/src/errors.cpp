#include "stratrd/errors.hpp"

#include <algorithm>

namespace stratrd {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EMPTY_INPUT";
        case ErrorCode::InvalidArm: return "INVALID_ARM";
        case ErrorCode::InvalidOutcome: return "INVALID_OUTCOME";
        case ErrorCode::EmptyStratum: return "EMPTY_STRATUM";
        case ErrorCode::BadCellReconstruction: return "BAD_CELL_RECONSTRUCTION";
        case ErrorCode::ParseError: return "PARSE_ERROR";
        case ErrorCode::AllStrataDegenerate: return "ALL_STRATA_DEGENERATE";
        case ErrorCode::EmptyArm: return "EMPTY_ARM";
        case ErrorCode::SameArm: return "SAME_ARM";
        case ErrorCode::TooFewValidReplicates: return "TOO_FEW_VALID_REPLICATES";
        case ErrorCode::ZeroTotalVariance: return "ZERO_TOTAL_VARIANCE";
        case ErrorCode::RejectionCap: return "REJECTION_CAP";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::InfeasibleProbability: return "INFEASIBLE_PROBABILITY";
        case ErrorCode::InvalidLambda: return "INVALID_LAMBDA";
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::NegativeVariance: return "NEGATIVE_VARIANCE";
    }
    return "UNKNOWN";
}

const char* warning_code_name(WarningCode code) {
    switch (code) {
        case WarningCode::ZeroArmStratum: return "ZERO_ARM_STRATUM";
        case WarningCode::SingleSubjectArm: return "SINGLE_SUBJECT_ARM";
        case WarningCode::AllStrataZeroArm: return "ALL_STRATA_ZERO_ARM";
        case WarningCode::NegativeVariance: return "NEGATIVE_VARIANCE";
        case WarningCode::NegativeNu2: return "NEGATIVE_NU2";
        case WarningCode::SingletonStratum: return "SINGLETON_STRATUM";
        case WarningCode::ZeroVarianceDeviation: return "ZERO_VARIANCE_DEVIATION";
        case WarningCode::Chi2Adequacy: return "CHI2_ADEQUACY";
    }
    return "UNKNOWN";
}

bool has_warning(const std::vector<Warning>& warnings, WarningCode code) {
    return std::any_of(warnings.begin(), warnings.end(),
                       [code](const Warning& w) { return w.code == code; });
}

} // namespace stratrd
