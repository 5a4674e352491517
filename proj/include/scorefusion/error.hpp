#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scorefusion {

enum class ErrorKind {
    EmptyPopulation,
    DegenerateRange,
    ZeroVariance,
    DuplicateTrial,
    NonFiniteScore,
    KeyMismatch,
    WeightDimensionMismatch,
    InvalidWeights,
    ZeroEER,
    DivisionByZero,
    InvalidSpec,
    OutOfRange,
    ParseError,
    Validation,
    Io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyPopulation: return "EmptyPopulation";
        case ErrorKind::DegenerateRange: return "DegenerateRange";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::DuplicateTrial: return "DuplicateTrial";
        case ErrorKind::NonFiniteScore: return "NonFiniteScore";
        case ErrorKind::KeyMismatch: return "KeyMismatch";
        case ErrorKind::WeightDimensionMismatch: return "WeightDimensionMismatch";
        case ErrorKind::InvalidWeights: return "InvalidWeights";
        case ErrorKind::ZeroEER: return "ZeroEER";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Process exit code for an error kind: 2 validation, 3 data, 4 IO.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec:
        case ErrorKind::OutOfRange:
        case ErrorKind::Validation:
        case ErrorKind::WeightDimensionMismatch:
        case ErrorKind::InvalidWeights:
            return 2;
        case ErrorKind::Io:
            return 4;
        default:
            return 3;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace scorefusion
