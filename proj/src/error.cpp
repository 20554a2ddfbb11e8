#include "wspline/error.hpp"

namespace wspline {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::EmptyAfterPrune: return "EmptyAfterPrune";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewClouds: return "TooFewClouds";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::BoundaryHoldout: return "BoundaryHoldout";
    case ErrorCode::BadDims: return "BadDims";
    }
    return "UnknownError";
}

} // namespace wspline
