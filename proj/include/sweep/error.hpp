#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sweep {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    OutOfRange,
    EmptySet,
    OutsideTube,
    AtSingularity,
    DidNotConverge,
    NotAMember,
    EmptyIntersection,
    ModulusUnavailable,
    NoPositiveTau,
    NoFeasibleEps,
    InapplicableBound,
    InitialInfeasible,
    TubeViolation,
    EpsExceeded,
    CertificationFailed,
    SchemaError,
    InfeasibleInitialPoint,
    UnknownShapeTag,
    IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type. `index` carries
// the step j for per-step failures, `level` the refinement level when known.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }
    std::optional<int> level() const noexcept { return level_; }

    Error with_level(int level) const {
        Error copy(kind_, std::string(what()).substr(to_string(kind_).size() + 2) + " (level " +
                              std::to_string(level) + ")",
                   index_);
        copy.level_ = level;
        return copy;
    }

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
    std::optional<int> level_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::OutsideTube: return "OutsideTube";
        case ErrorKind::AtSingularity: return "AtSingularity";
        case ErrorKind::DidNotConverge: return "DidNotConverge";
        case ErrorKind::NotAMember: return "NotAMember";
        case ErrorKind::EmptyIntersection: return "EmptyIntersection";
        case ErrorKind::ModulusUnavailable: return "ModulusUnavailable";
        case ErrorKind::NoPositiveTau: return "NoPositiveTau";
        case ErrorKind::NoFeasibleEps: return "NoFeasibleEps";
        case ErrorKind::InapplicableBound: return "InapplicableBound";
        case ErrorKind::InitialInfeasible: return "InitialInfeasible";
        case ErrorKind::TubeViolation: return "TubeViolation";
        case ErrorKind::EpsExceeded: return "EpsExceeded";
        case ErrorKind::CertificationFailed: return "CertificationFailed";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::InfeasibleInitialPoint: return "InfeasibleInitialPoint";
        case ErrorKind::UnknownShapeTag: return "UnknownShapeTag";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace sweep
