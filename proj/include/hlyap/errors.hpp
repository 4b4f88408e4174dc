#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hlyap {

enum class ErrorKind {
    OrderOutOfRange,
    BoundaryOrderUnsupported,
    DomainInvalid,
    QuadratureFailure,
    EvalError,
    OutOfTableRange,
    SyntaxError,
    UnknownIdentifier,
    ResourceLimit,
    ConvergenceFailure,
    DifferenceInstability,
    ZeroLambda,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
        case ErrorKind::BoundaryOrderUnsupported: return "BoundaryOrderUnsupported";
        case ErrorKind::DomainInvalid: return "DomainInvalid";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::EvalError: return "EvalError";
        case ErrorKind::OutOfTableRange: return "OutOfTableRange";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::ResourceLimit: return "ResourceLimit";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::DifferenceInstability: return "DifferenceInstability";
        case ErrorKind::ZeroLambda: return "ZeroLambda";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with the byte offset of the offending token and the set of
/// tokens that would have been accepted there.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
        : Error(ErrorKind::SyntaxError, message + " at offset " + std::to_string(offset)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace hlyap
