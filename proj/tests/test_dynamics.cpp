#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "padic/dynamics.hpp"
#include "padic/oracles.hpp"

using namespace padic;

namespace {

SequenceSpec catalan_spec() {
  SequenceSpec s;
  s.kind = SequenceSpec::Kind::Algebraic;
  s.annihilator = "x*y^2 - y + 1";
  s.oracle = "catalan";
  return s;
}

SequenceSpec identity_spec() {
  SequenceSpec s;
  s.kind = SequenceSpec::Kind::Linrec;
  s.coeffs = {2, -1};
  s.init = {0, 1};
  return s;
}

SequenceSpec fibonacci_spec() {
  SequenceSpec s;
  s.kind = SequenceSpec::Kind::Linrec;
  s.coeffs = {1, 1};
  s.init = {0, 1};
  return s;
}

}  // namespace

TEST_CASE("identity sequence: a(k p^m + r) converges to r") {
  for (uint32_t p : {2u, 3u}) {
    Tower t = build_tower(identity_spec(), p, 6);
    uint64_t mod = pow_checked(p, 6);
    for (uint64_t k = 1; k <= 8; ++k)
      for (uint64_t r = 0; r <= 8; ++r) {
        LimitResult res = padic_limit(t, k, r);
        REQUIRE(res.is_limit);
        CHECK(res.value.value() == r % mod);
        CHECK(res.value.precision() == 6);
      }
  }
}

TEST_CASE("catalan limits exist for every k, r") {
  Tower t = build_tower(catalan_spec(), 2, 6);
  for (uint64_t k = 1; k <= 8; ++k)
    for (uint64_t r = 0; r <= 8; ++r) {
      LimitResult res = padic_limit(t, k, r);
      REQUIRE(res.is_limit);
    }
  // C(2^m - 1) -> 2 in Z_2: the k=1, r=0 limit is 2 mod 4.
  LimitResult res = padic_limit(t, 1, 0);
  REQUIRE(res.is_limit);
  CHECK(res.value.value() % 4 == 2);
}

TEST_CASE("catalan limit agrees with direct evaluation at deep indices") {
  Tower t = build_tower(catalan_spec(), 2, 6);
  for (uint64_t k = 1; k <= 4; ++k)
    for (uint64_t r = 0; r <= 4; ++r) {
      LimitResult res = padic_limit(t, k, r);
      REQUIRE(res.is_limit);
      for (uint32_t a = 1; a <= 6; ++a) {
        const Dfao& m = t.level(a).machine;
        uint64_t mod = pow_checked(2, a);
        for (uint64_t e : {20ull, 30ull, 40ull})
          CHECK(eval(m, k * (uint64_t{1} << e) + r) == res.value.value() % mod);
      }
    }
}

TEST_CASE("fibonacci a(2^m) cycles with period 2") {
  Tower t = build_tower(fibonacci_spec(), 2, 12);
  LimitResult res = padic_limit(t, 1, 0);
  REQUIRE_FALSE(res.is_limit);
  CHECK(res.period == 2);
  REQUIRE(res.values.size() == 2);
  // Cross-check against the brute-force recurrence: F(2^m) mod 2^12
  // alternates between the two cycle values once m is large.
  std::vector<uint64_t> fib = linrec_mod({1, 1}, {0, 1}, (uint64_t{1} << 20) + 1, 2, 12);
  std::vector<uint64_t> seen;
  for (uint64_t m = 15; m <= 20; ++m) seen.push_back(fib[uint64_t{1} << m]);
  for (size_t i = 0; i + 2 < seen.size(); ++i) CHECK(seen[i] == seen[i + 2]);
  CHECK(seen[0] != seen[1]);
  uint64_t a = res.values[0].value(), b = res.values[1].value();
  CHECK(((seen[0] == a && seen[1] == b) || (seen[0] == b && seen[1] == a)));
}

TEST_CASE("padic_limit input validation") {
  Tower t = build_tower(identity_spec(), 2, 4);
  CHECK_THROWS_AS(padic_limit(t, 0, 1), invalid_parameter);
}

TEST_CASE("digit grid of the identity sequence") {
  Tower t = build_tower(identity_spec(), 2, 8);
  DigitGrid g = digit_grid(t, 3, 5, 10, 8);
  CHECK(g.rows.size() == 10);
  CHECK(g.width == 8);
  // Row n holds the low 8 binary digits of 3*2^n + 5, most significant left.
  for (uint64_t n = 0; n < 10; ++n) {
    uint64_t v = (3 * (uint64_t{1} << n) + 5) % 256;
    for (uint32_t c = 0; c < 8; ++c) CHECK(g.rows[n][c] == ((v >> (7 - c)) & 1));
  }
  std::string pbm = g.to_pbm();
  CHECK(pbm.rfind("P1\n8 10\n", 0) == 0);
  CHECK_THROWS_AS(digit_grid(t, 1, 0, 4, 9), precision_error);
}

TEST_CASE("digit grid rows stabilize on the catalan limit") {
  Tower t = build_tower(catalan_spec(), 2, 6);
  DigitGrid g = digit_grid(t, 1, 0, 40, 6);
  // Deep rows all equal the limit's digits.
  LimitResult res = padic_limit(t, 1, 0);
  REQUIRE(res.is_limit);
  std::vector<uint32_t> want(6, 0);
  uint64_t v = res.value.value();
  for (uint32_t c = 6; c-- > 0;) {
    want[c] = static_cast<uint32_t>(v % 2);
    v /= 2;
  }
  for (uint64_t n = 30; n < 40; ++n) CHECK(g.rows[n] == want);
}
