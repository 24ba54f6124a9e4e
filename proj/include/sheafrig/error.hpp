#pragma once

#include <stdexcept>
#include <string>

namespace sheafrig {

enum class ErrorCode {
    InvalidArgument = 1,
    InvalidPresentation,
    MixedDirectionBar,
    EmptySequence,
    ZeroCovector,
    InvalidRegionParameters,
    DimensionMismatch,
    NearCriticalValue,
    PropernessViolation,
    HypothesisUnverified,
    WindowBoundViolated,
    OddDimension,
    RankDeficientBasis,
    ZeroSigma,
    NotLagrangian,
    SingularDifferential,
    PreconditionViolated,
    DegenerateOmegaT,
    MollificationTooCoarse,
    GraphConditionFailed,
    BlendWidthNotFound,
    DegenerateGF,
    GateFailure,
    NumericBudgetExceeded,
    IoFailure,
    UnknownStep,
    InvalidConfig,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const { return code_; }
    // message without the code prefix; for GateFailure this is the step name
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace sheafrig
