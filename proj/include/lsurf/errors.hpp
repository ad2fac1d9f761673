#pragma once

#include <stdexcept>
#include <string>

namespace lsurf {

enum class ErrorCode {
    DomainError,
    DegenerateNormal,
    SingularBasis,
    NotDiagonalGauge,
    NotGeneralType,
    NoPrincipalTangents,
    FrameBranchFlip,
    FrameMismatch,
    IndeterminateEquation,
    InvalidMetric,
    StepTooLarge,
    IntegrabilityTooLarge,
    MuVanishes,
    GridTooSmall,
    NotSeparable,
    NonPositive,
    LorentzDegenerate,
    IoError,
    ConfigError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-readable error code alongside the message.
class GeomError : public std::runtime_error {
public:
    GeomError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lsurf
