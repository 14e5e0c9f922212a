#include "padic/residue.hpp"

#include <algorithm>

#include "json.hpp"

namespace padic {

namespace {
constexpr uint64_t kModulusCap = uint64_t{1} << 62;
constexpr uint64_t kPrimeCap = uint64_t{1} << 20;
}  // namespace

bool is_prime(uint64_t p) {
  if (p >= kPrimeCap) throw invalid_parameter("prime candidate too large: " + std::to_string(p));
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

uint64_t pow_checked(uint64_t base, uint32_t exp) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kModulusCap / base)
      throw budget_exceeded("modulus p^alpha exceeds 2^62");
    r *= base;
  }
  return r;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

Residue::Residue(uint64_t value, uint32_t p, uint32_t alpha)
    : value_(value), p_(p), alpha_(alpha) {
  if (!is_prime(p)) throw invalid_parameter("p = " + std::to_string(p) + " is not prime");
  modulus_ = pow_checked(p, alpha);
  if (value_ >= modulus_)
    throw invalid_parameter("residue value " + std::to_string(value) + " out of range mod " +
                            std::to_string(p) + "^" + std::to_string(alpha));
}

void Residue::check_compatible(const Residue& other) const {
  if (p_ != other.p_ || alpha_ != other.alpha_)
    throw invalid_parameter("residue modulus mismatch");
}

Residue Residue::add(const Residue& other) const {
  check_compatible(other);
  uint64_t v = value_ + other.value_;
  if (v >= modulus_) v -= modulus_;
  return Residue(v, p_, alpha_);
}

Residue Residue::sub(const Residue& other) const {
  check_compatible(other);
  uint64_t v = value_ >= other.value_ ? value_ - other.value_ : value_ + modulus_ - other.value_;
  return Residue(v, p_, alpha_);
}

Residue Residue::mul(const Residue& other) const {
  check_compatible(other);
  return Residue(mulmod(value_, other.value_, modulus_), p_, alpha_);
}

Residue Residue::project(uint32_t beta) const {
  if (beta > alpha_)
    throw precision_error("cannot project to precision " + std::to_string(beta) +
                          " from " + std::to_string(alpha_));
  return Residue(value_ % pow_checked(p_, beta), p_, beta);
}

Residue Residue::inv_unit() const {
  if (alpha_ == 0) throw not_invertible("trivial ring has no units");
  if (value_ % p_ == 0)
    throw not_invertible(std::to_string(value_) + " is not a unit mod " +
                         std::to_string(p_) + "^" + std::to_string(alpha_));
  // Units of Z/p^alpha Z have order dividing phi(p^alpha).
  uint64_t phi = modulus_ / p_ * (p_ - 1);
  uint64_t inv = powmod(value_, phi - 1, modulus_);
  if (mulmod(inv, value_, modulus_) != 1) throw internal_error("inverse computation failed");
  return Residue(inv, p_, alpha_);
}

std::string Residue::to_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["alpha"] = alpha_;
  j["value"] = value_;
  return j.dump();
}

Residue Residue::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  return Residue(j.at("value").get<uint64_t>(), j.at("p").get<uint32_t>(),
                 j.at("alpha").get<uint32_t>());
}

uint64_t DigitString::value() const {
  uint64_t n = 0;
  for (uint8_t d : digits) n = n * p + d;
  return n;
}

DigitString digits_msd(uint64_t n, uint32_t p) {
  if (!is_prime(p)) throw invalid_parameter("p = " + std::to_string(p) + " is not prime");
  DigitString s;
  s.p = p;
  while (n > 0) {
    s.digits.push_back(static_cast<uint8_t>(n % p));
    n /= p;
  }
  std::reverse(s.digits.begin(), s.digits.end());
  return s;
}

TruncatedPadic TruncatedPadic::project(uint32_t beta) const {
  if (beta > precision()) throw precision_error("truncated p-adic projection beyond precision");
  TruncatedPadic t;
  t.p = p;
  t.digits.assign(digits.begin(), digits.begin() + beta);
  return t;
}

uint64_t TruncatedPadic::value() const {
  uint64_t n = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) n = n * p + *it;
  return n;
}

TruncatedPadic truncated_from_value(uint64_t v, uint32_t p, uint32_t precision) {
  TruncatedPadic t;
  t.p = p;
  for (uint32_t i = 0; i < precision; ++i) {
    t.digits.push_back(static_cast<uint8_t>(v % p));
    v /= p;
  }
  return t;
}

}  // namespace padic
