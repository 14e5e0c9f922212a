#ifndef PADIC_ERRORS_HPP
#define PADIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padic {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument supplied by the caller (non-prime p, mismatched moduli, ...).
struct invalid_parameter : error {
  using error::error;
};

// Requested precision exceeds what the value or tower carries.
struct precision_error : error {
  using error::error;
};

struct not_invertible : error {
  using error::error;
};

// The construction's hypotheses fail for this input (e.g. a non-unit
// derivative at the origin in the algebraic embedding).
struct not_supported : error {
  using error::error;
};

// Input automaton is not in the normal form the operation requires.
struct normalization_error : error {
  using error::error;
};

// A built object failed its validation oracle; carries the diagnostic.
struct construction_error : error {
  using error::error;
};

// Invariant violation that indicates a bug, not bad input.
struct internal_error : error {
  using error::error;
};

struct budget_exceeded : error {
  using error::error;
};

// Vershik successor ran off the truncated path depth cap.
struct needs_deeper_path : error {
  using error::error;
};

struct parse_error : invalid_parameter {
  parse_error(const std::string& msg, int line, int col)
      : invalid_parameter(msg + " at line " + std::to_string(line) + ", column " +
                          std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace padic

#endif
