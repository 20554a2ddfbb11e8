#pragma once

#include <stdexcept>
#include <string>

namespace wspline {

enum class ErrorCode {
    EmptyMeasure,
    NonFinite,
    DimensionMismatch,
    InvalidWeight,
    SolverFailure,
    EmptyAfterPrune,
    TooFewPoints,
    TooFewClouds,
    ConfigError,
    BadConfig,
    ParseError,
    IoError,
    BadInterval,
    BoundaryHoldout,
    BadDims,
};

const char* to_string(ErrorCode code);

/// Single exception type carrying a machine-readable code. The CLI prints
/// errors as one line: "error: <code>: <message>".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace wspline
