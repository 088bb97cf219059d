#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subsel {

enum class ErrorKind {
    SingularMatrix,
    NotPsd,
    NotSymmetric,
    CapacitanceSingular,
    DimensionMismatch,
    InvalidArgument,
    KOutOfRange,
    CertificateViolated,
    NoCandidates,
    RankDeficient,
    TooLarge,
    Infeasible,
    ParseError,
    EmptyFile,
    ValidationFailed,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::CapacitanceSingular: return "CapacitanceSingular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::CertificateViolated: return "CertificateViolated";
    case ErrorKind::NoCandidates: return "NoCandidates";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace subsel
