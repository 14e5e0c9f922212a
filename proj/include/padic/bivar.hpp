#ifndef PADIC_BIVAR_HPP
#define PADIC_BIVAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "padic/errors.hpp"

namespace padic {

// Sparse bivariate polynomial. Coefficients are exact signed integers when
// used with modulus 0, or canonical representatives in [0, mod) otherwise.
// Terms are kept sorted by (i, j) with no explicit zeros.
struct BivarPoly {
  struct Term {
    int64_t i = 0;  // x exponent
    int64_t j = 0;  // y exponent
    int64_t c = 0;
  };
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }
  int64_t deg_x() const;
  int64_t deg_y() const;
  int64_t coeff(int64_t i, int64_t j) const;
  int64_t at_origin() const { return coeff(0, 0); }
  size_t size() const { return terms.size(); }

  bool operator==(const BivarPoly& o) const;
  bool operator<(const BivarPoly& o) const;

  static BivarPoly constant(int64_t c);
  static BivarPoly monomial(int64_t i, int64_t j, int64_t c);

  std::string to_json() const;  // list of [i, j, c]
  static BivarPoly from_json(const std::string& text);
  std::string to_string() const;
};

// mod = 0 means exact signed arithmetic.
BivarPoly add(const BivarPoly& a, const BivarPoly& b, uint64_t mod = 0);
BivarPoly sub(const BivarPoly& a, const BivarPoly& b, uint64_t mod = 0);
BivarPoly mul(const BivarPoly& a, const BivarPoly& b, uint64_t mod = 0);
BivarPoly pow(const BivarPoly& a, uint64_t e, uint64_t mod);
BivarPoly reduce(const BivarPoly& a, uint64_t mod);
BivarPoly derivative_y(const BivarPoly& a);

// Cartier section operator: picks coefficients with exponents congruent to
// (r, s) mod p and divides the exponents by p.
BivarPoly cartier(const BivarPoly& a, uint32_t r, uint32_t s, uint32_t p);

// P / Q with Q a unit at the origin (checked where the modulus is known).
struct RationalBivar {
  BivarPoly num;
  BivarPoly den;
};

// Recursive-descent parser for the tiny infix format
// "x*y^2 - y + 1" (integers, x, y, +, -, *, ^, parentheses).
BivarPoly parse_poly(const std::string& text);

}  // namespace padic

#endif
