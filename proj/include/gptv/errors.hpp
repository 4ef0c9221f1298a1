#ifndef GPTV_ERRORS_HPP
#define GPTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gptv {

/// Malformed input: an object violates its type invariants (bad
/// normalization, out-of-range probability, dimension mismatch, ...).
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A well-formed input that an operation cannot accept (degenerate
/// assemblage, missing witness, size cap exceeded, ...).
/// The CLI maps this to exit code 3.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A state the library's own invariants rule out. Seeing one means a
/// bug, not a bad input.
class InternalInconsistencyError : public std::logic_error {
public:
    explicit InternalInconsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace gptv

#endif
