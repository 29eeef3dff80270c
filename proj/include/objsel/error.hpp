#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace objsel {

enum class ErrorCode {
    // data validation
    EmptyInput,
    LengthMismatch,
    NonFiniteValue,
    DuplicateLocation,
    NonPositiveThreshold,
    DegenerateSplit,
    InvalidSplit,
    MissingTimestamp,
    // transforms / fitting
    DomainViolation,
    DegenerateScale,
    NonPositiveScale,
    NoZeroState,
    InvalidProbability,
    EmptyEvaluationSet,
    UnknownObjective,
    // information
    ZeroSampleCount,
    OrderingViolation,
    NegativeSigma,
    NonPositiveMedian,
    InvalidCoverage,
    NoFiniteEntropy,
    // diagnostics / synthetic
    SizeExceedsData,
    ZeroVariance,
    InvalidModel,
    NeedTwoObjectives,
    // io
    EmptyFile,
    MissingColumn,
    UnparseableNumber,
    IoError,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::DuplicateLocation: return "DuplicateLocation";
        case ErrorCode::NonPositiveThreshold: return "NonPositiveThreshold";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::InvalidSplit: return "InvalidSplit";
        case ErrorCode::MissingTimestamp: return "MissingTimestamp";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::DegenerateScale: return "DegenerateScale";
        case ErrorCode::NonPositiveScale: return "NonPositiveScale";
        case ErrorCode::NoZeroState: return "NoZeroState";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::EmptyEvaluationSet: return "EmptyEvaluationSet";
        case ErrorCode::UnknownObjective: return "UnknownObjective";
        case ErrorCode::ZeroSampleCount: return "ZeroSampleCount";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::NegativeSigma: return "NegativeSigma";
        case ErrorCode::NonPositiveMedian: return "NonPositiveMedian";
        case ErrorCode::InvalidCoverage: return "InvalidCoverage";
        case ErrorCode::NoFiniteEntropy: return "NoFiniteEntropy";
        case ErrorCode::SizeExceedsData: return "SizeExceedsData";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::NeedTwoObjectives: return "NeedTwoObjectives";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::UnparseableNumber: return "UnparseableNumber";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Usage errors map to CLI exit code 1, everything else to 2.
constexpr bool is_usage_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownObjective:
        case ErrorCode::InvalidSplit:
        case ErrorCode::InvalidArgument:
        case ErrorCode::NeedTwoObjectives:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace detail
}  // namespace objsel
