#pragma once

#include <stdexcept>
#include <string>

namespace glevy {

enum class ErrorCode {
    EmptyFamily,
    AtomAtOrigin,
    DegenerateDensityRatio,
    NonPositiveWeight,
    MissingProbePoint,
    CflViolation,
    NonFiniteValue,
    PartitionTooLong,
    OutOfLatticeRange,
    NonPositiveDensityRatio,
    InvalidExponent,
    UnboundedPayoff,
    DisjointSupportViolation,
    ConfigParse,
    BadArgument,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::EmptyFamily:               return "EmptyFamily";
        case ErrorCode::AtomAtOrigin:              return "AtomAtOrigin";
        case ErrorCode::DegenerateDensityRatio:    return "DegenerateDensityRatio";
        case ErrorCode::NonPositiveWeight:         return "NonPositiveWeight";
        case ErrorCode::MissingProbePoint:         return "MissingProbePoint";
        case ErrorCode::CflViolation:              return "CflViolation";
        case ErrorCode::NonFiniteValue:            return "NonFiniteValue";
        case ErrorCode::PartitionTooLong:          return "PartitionTooLong";
        case ErrorCode::OutOfLatticeRange:         return "OutOfLatticeRange";
        case ErrorCode::NonPositiveDensityRatio:   return "NonPositiveDensityRatio";
        case ErrorCode::InvalidExponent:           return "InvalidExponent";
        case ErrorCode::UnboundedPayoff:           return "UnboundedPayoff";
        case ErrorCode::DisjointSupportViolation:  return "DisjointSupportViolation";
        case ErrorCode::ConfigParse:               return "ConfigParse";
        case ErrorCode::BadArgument:               return "BadArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace glevy
