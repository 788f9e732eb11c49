#pragma once

#include <stdexcept>
#include <string>

namespace horo {

// Error codes carried by every horo::Error. The CLI maps these to exit
// status 3 (input/usage errors); verification failures use exit status 2.
enum class ErrorCode {
    CoincidentEndpoints,
    DegenerateSegment,
    NotLoxodromic,
    NotJointlyLoxodromic,
    DimensionMismatch,
    ProjectionsTooClose,
    RadiusTooSmall,
    NoConvergence,
    NoCandidateAligns,
    BallTooLarge,
    InsufficientGrowthData,
    EmptyCells,
    SpecParse,
    UnknownLemma,
    InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::CoincidentEndpoints:    return "CoincidentEndpoints";
        case ErrorCode::DegenerateSegment:      return "DegenerateSegment";
        case ErrorCode::NotLoxodromic:          return "NotLoxodromic";
        case ErrorCode::NotJointlyLoxodromic:   return "NotJointlyLoxodromic";
        case ErrorCode::DimensionMismatch:      return "DimensionMismatch";
        case ErrorCode::ProjectionsTooClose:    return "ProjectionsTooClose";
        case ErrorCode::RadiusTooSmall:         return "RadiusTooSmall";
        case ErrorCode::NoConvergence:          return "NoConvergence";
        case ErrorCode::NoCandidateAligns:      return "NoCandidateAligns";
        case ErrorCode::BallTooLarge:           return "BallTooLarge";
        case ErrorCode::InsufficientGrowthData: return "InsufficientGrowthData";
        case ErrorCode::EmptyCells:             return "EmptyCells";
        case ErrorCode::SpecParse:              return "SpecParse";
        case ErrorCode::UnknownLemma:           return "UnknownLemma";
        case ErrorCode::InvalidArgument:        return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace horo
