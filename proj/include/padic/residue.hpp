#ifndef PADIC_RESIDUE_HPP
#define PADIC_RESIDUE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "padic/errors.hpp"

namespace padic {

// Deterministic trial division; the digit alphabet keeps p < 2^20.
bool is_prime(uint64_t p);

// p^alpha, throwing budget_exceeded beyond 2^62 so residues stay in one word.
uint64_t pow_checked(uint64_t base, uint32_t exp);

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m);

// An element of Z/p^alpha Z carrying its modulus. alpha = 0 is the trivial
// ring {0}. Immutable after construction.
class Residue {
 public:
  Residue(uint64_t value, uint32_t p, uint32_t alpha);

  uint64_t value() const { return value_; }
  uint32_t p() const { return p_; }
  uint32_t alpha() const { return alpha_; }
  uint64_t modulus() const { return modulus_; }

  Residue add(const Residue& other) const;
  Residue sub(const Residue& other) const;
  Residue mul(const Residue& other) const;

  // Reduction mod p^beta, beta <= alpha.
  Residue project(uint32_t beta) const;

  // Multiplicative inverse; requires gcd(value, p) = 1.
  Residue inv_unit() const;

  bool operator==(const Residue& other) const {
    return value_ == other.value_ && p_ == other.p_ && alpha_ == other.alpha_;
  }

  std::string to_json() const;
  static Residue from_json(const std::string& text);

 private:
  void check_compatible(const Residue& other) const;

  uint64_t value_;
  uint32_t p_;
  uint32_t alpha_;
  uint64_t modulus_;
};

// Base-p digits of a natural number, most significant first. The canonical
// representation of 0 is the empty sequence.
struct DigitString {
  uint32_t p = 2;
  std::vector<uint8_t> digits;  // MSD first, no leading zero

  uint64_t value() const;
  bool canonical() const { return digits.empty() || digits.front() != 0; }
};

DigitString digits_msd(uint64_t n, uint32_t p);

// Finite-precision stand-in for an element of Z_p; digits least significant
// first, precision = digits.size().
struct TruncatedPadic {
  uint32_t p = 2;
  std::vector<uint8_t> digits;  // LSD first

  uint32_t precision() const { return static_cast<uint32_t>(digits.size()); }
  TruncatedPadic project(uint32_t beta) const;
  uint64_t value() const;  // as integer, valid while p^precision <= 2^62
  bool operator==(const TruncatedPadic& o) const { return p == o.p && digits == o.digits; }
};

TruncatedPadic truncated_from_value(uint64_t v, uint32_t p, uint32_t precision);

}  // namespace padic

#endif
