#pragma once

#include <stdexcept>
#include <string>

namespace mtom {

// Input violates a documented precondition of a pure operation.
// Plain std::invalid_argument is used for these throughout.

// Input is structurally valid but degenerate (e.g. all-zero constellation).
struct DegenerateInputError : std::invalid_argument {
    explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

// A file or text blob does not conform to its declared format.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A parity-check matrix cannot be brought to an encodable form.
struct CodeConstructionError : std::runtime_error {
    explicit CodeConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or numeric breakdown (e.g. diverged training).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called against state it does not match (e.g. stale cache).
struct InvalidStateError : std::logic_error {
    explicit InvalidStateError(const std::string& what) : std::logic_error(what) {}
};

// SNR(P) has no interior maximum (effective nonlinear coefficient <= 0).
struct NoInteriorMaximumError : std::domain_error {
    explicit NoInteriorMaximumError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace mtom
