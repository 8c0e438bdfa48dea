/**
 * @file error.hpp
 * @brief Error codes and the exception type shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace stagwave {

enum class ErrorCode {
    NonPositiveDepth,
    NonPositiveGravity,
    NonPositiveWavelength,
    EqualVorticities,
    NonPositiveWavenumber,
    NotThreeRealRoots,
    DegenerateRoot,
    UnsupportedCase,
    NoAdmissibleThreshold,
    NonFredholmSpeed,
    KernelNotSimple,
    TransversalityFailure,
    UnsupportedRegime,
    WavelengthAboveThreshold,
    AmplitudeSelectionFailed,
    PointOutsideFluid,
    BracketingFailed,
    NewtonDivergence,
    DegenerateLaminarLine,
    GridTooCoarse,
    SingularSystem,
    NoSignChange,
    InvalidArgument,
    ConfigError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::NonPositiveGravity: return "NonPositiveGravity";
    case ErrorCode::NonPositiveWavelength: return "NonPositiveWavelength";
    case ErrorCode::EqualVorticities: return "EqualVorticities";
    case ErrorCode::NonPositiveWavenumber: return "NonPositiveWavenumber";
    case ErrorCode::NotThreeRealRoots: return "NotThreeRealRoots";
    case ErrorCode::DegenerateRoot: return "DegenerateRoot";
    case ErrorCode::UnsupportedCase: return "UnsupportedCase";
    case ErrorCode::NoAdmissibleThreshold: return "NoAdmissibleThreshold";
    case ErrorCode::NonFredholmSpeed: return "NonFredholmSpeed";
    case ErrorCode::KernelNotSimple: return "KernelNotSimple";
    case ErrorCode::TransversalityFailure: return "TransversalityFailure";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::WavelengthAboveThreshold: return "WavelengthAboveThreshold";
    case ErrorCode::AmplitudeSelectionFailed: return "AmplitudeSelectionFailed";
    case ErrorCode::PointOutsideFluid: return "PointOutsideFluid";
    case ErrorCode::BracketingFailed: return "BracketingFailed";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::DegenerateLaminarLine: return "DegenerateLaminarLine";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace stagwave
