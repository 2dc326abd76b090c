#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stratrd {

enum class ErrorCode {
    EmptyInput,
    InvalidArm,
    InvalidOutcome,
    EmptyStratum,
    BadCellReconstruction,
    ParseError,
    AllStrataDegenerate,
    EmptyArm,
    SameArm,
    TooFewValidReplicates,
    ZeroTotalVariance,
    RejectionCap,
    DimensionMismatch,
    InfeasibleProbability,
    InvalidLambda,
    InvalidArgument,
    NegativeVariance,
};

const char* error_code_name(ErrorCode code);

// Thrown by estimators, variance routines, tests and ingestion on contract
// violations. Carries a machine-checkable code next to the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

enum class WarningCode {
    ZeroArmStratum,        // n_.1k = 0 or n_.0k = 0: dropped by MH/PS weighting
    SingleSubjectArm,      // n_.1k = 1 or n_.0k = 1: correction factor degenerates
    AllStrataZeroArm,      // every stratum has an empty arm
    NegativeVariance,      // Sato estimate below zero
    NegativeNu2,           // mGR_ATE / PS heterogeneity component below zero
    SingletonStratum,      // n_..k = 1: hypergeometric variance undefined
    ZeroVarianceDeviation, // zero-variance stratum with nonzero deviation
    Chi2Adequacy,          // chi-square approximation adequacy heuristic
};

const char* warning_code_name(WarningCode code);

struct Warning {
    WarningCode code;
    std::string message;

    bool operator==(const Warning&) const = default;
};

bool has_warning(const std::vector<Warning>& warnings, WarningCode code);

} // namespace stratrd
