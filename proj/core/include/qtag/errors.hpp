#pragma once

#include <stdexcept>
#include <string>

namespace qtag {

// Error taxonomy used across the library:
//   std::invalid_argument  - bad configuration or shape mismatch
//   std::out_of_range      - qubit / slot index errors
//   std::domain_error      - numeric-input errors (non-finite angles, ...)
// Domain-specific failures below carry extra context for callers that
// count or report them (the CLI maps them to exit codes and skip counts).

/// Malformed input data; remembers the 1-based line it came from.
class ParseError : public std::runtime_error {
public:
    ParseError(long line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Jet total four-momentum is massless or spacelike; no rest frame exists.
class KinematicsError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Gram-Schmidt seed vectors are linearly dependent; the jet is skipped.
class DegeneracyError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Corrupt or truncated binary container.
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qtag
