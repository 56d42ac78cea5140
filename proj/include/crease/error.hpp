#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crease {

enum class ErrorCode {
    GridTooCoarse,
    OdeBlowUp,
    BadFrame,
    DegenerateCurve,
    NotDevelopable,
    InclinationSingular,
    InconsistentBend,
    BadDocument,
    DegenerateRuling,
    RulingTangentToCrease,
    FoldAngleOutOfRange,
    AssemblyMismatch,
    IncompatiblePattern,
    RulingParallelToTarget,
    OutOfExtent,
    TransformDegenerate,
    InflectionInPath,
    StraightCreaseDegeneracy,
    ReductionDegenerate,
    ApexCollision,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::OdeBlowUp: return "OdeBlowUp";
    case ErrorCode::BadFrame: return "BadFrame";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::NotDevelopable: return "NotDevelopable";
    case ErrorCode::InclinationSingular: return "InclinationSingular";
    case ErrorCode::InconsistentBend: return "InconsistentBend";
    case ErrorCode::BadDocument: return "BadDocument";
    case ErrorCode::DegenerateRuling: return "DegenerateRuling";
    case ErrorCode::RulingTangentToCrease: return "RulingTangentToCrease";
    case ErrorCode::FoldAngleOutOfRange: return "FoldAngleOutOfRange";
    case ErrorCode::AssemblyMismatch: return "AssemblyMismatch";
    case ErrorCode::IncompatiblePattern: return "IncompatiblePattern";
    case ErrorCode::RulingParallelToTarget: return "RulingParallelToTarget";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::TransformDegenerate: return "TransformDegenerate";
    case ErrorCode::InflectionInPath: return "InflectionInPath";
    case ErrorCode::StraightCreaseDegeneracy: return "StraightCreaseDegeneracy";
    case ErrorCode::ReductionDegenerate: return "ReductionDegenerate";
    case ErrorCode::ApexCollision: return "ApexCollision";
    }
    return "Unknown";
}

class CreaseError : public std::runtime_error {
public:
    CreaseError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace crease
