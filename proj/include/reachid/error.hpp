#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reachid {

enum class ErrorKind {
    SingularMatrix,
    NoConvergence,
    DimensionMismatch,
    TieExhausted,
    NotADifferenceOfSegment,
    EmptyDifference,
    HorizonTooLarge,
    SymmetricInput,
    ZeroSegment,
    NotControllable,
    NoSurvivors,
    InsufficientSets,
    ParseError,
    SchemaError,
    GeneratorCapExceeded,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::TieExhausted: return "TieExhausted";
        case ErrorKind::NotADifferenceOfSegment: return "NotADifferenceOfSegment";
        case ErrorKind::EmptyDifference: return "EmptyDifference";
        case ErrorKind::HorizonTooLarge: return "HorizonTooLarge";
        case ErrorKind::SymmetricInput: return "SymmetricInput";
        case ErrorKind::ZeroSegment: return "ZeroSegment";
        case ErrorKind::NotControllable: return "NotControllable";
        case ErrorKind::NoSurvivors: return "NoSurvivors";
        case ErrorKind::InsufficientSets: return "InsufficientSets";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::GeneratorCapExceeded: return "GeneratorCapExceeded";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this exception. The
/// identification pipeline fills in the time index and stage when the
/// failure can be pinned to a particular reachable set.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    std::optional<int> time_index() const noexcept { return time_; }
    const std::string& stage() const noexcept { return stage_; }

    Error& at(int time, std::string stage) {
        time_ = time;
        stage_ = std::move(stage);
        return *this;
    }

private:
    ErrorKind kind_;
    std::string detail_;
    std::optional<int> time_;
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace reachid
