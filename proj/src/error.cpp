#include "sheafrig/error.hpp"

namespace sheafrig {

const char* error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPresentation: return "InvalidPresentation";
    case ErrorCode::MixedDirectionBar: return "MixedDirectionBar";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::ZeroCovector: return "ZeroCovector";
    case ErrorCode::InvalidRegionParameters: return "InvalidRegionParameters";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NearCriticalValue: return "NearCriticalValue";
    case ErrorCode::PropernessViolation: return "PropernessViolation";
    case ErrorCode::HypothesisUnverified: return "HypothesisUnverified";
    case ErrorCode::WindowBoundViolated: return "WindowBoundViolated";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::RankDeficientBasis: return "RankDeficientBasis";
    case ErrorCode::ZeroSigma: return "ZeroSigma";
    case ErrorCode::NotLagrangian: return "NotLagrangian";
    case ErrorCode::SingularDifferential: return "SingularDifferential";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::DegenerateOmegaT: return "DegenerateOmegaT";
    case ErrorCode::MollificationTooCoarse: return "MollificationTooCoarse";
    case ErrorCode::GraphConditionFailed: return "GraphConditionFailed";
    case ErrorCode::BlendWidthNotFound: return "BlendWidthNotFound";
    case ErrorCode::DegenerateGF: return "DegenerateGF";
    case ErrorCode::GateFailure: return "GateFailure";
    case ErrorCode::NumericBudgetExceeded: return "NumericBudgetExceeded";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnknownStep: return "UnknownStep";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace sheafrig
