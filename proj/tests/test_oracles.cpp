#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "padic/oracles.hpp"

using namespace padic;

TEST_CASE("catalan convolution") {
  // Large modulus so the true values are visible.
  std::vector<uint64_t> c = catalan_mod(8, 2, 30);
  CHECK(c == std::vector<uint64_t>{1, 1, 2, 5, 14, 42, 132, 429});
  std::vector<uint64_t> c4 = catalan_mod(8, 2, 2);
  CHECK(c4 == std::vector<uint64_t>{1, 1, 2, 1, 2, 2, 0, 1});
  CHECK(catalan_mod(1, 2, 1) == std::vector<uint64_t>{1});
  CHECK_THROWS_AS(catalan_mod((uint64_t{1} << 15) + 1, 2, 1), budget_exceeded);
}

TEST_CASE("linear recurrences") {
  std::vector<uint64_t> fib = linrec_mod({1, 1}, {0, 1}, 8, 2, 10);
  CHECK(fib == std::vector<uint64_t>{0, 1, 1, 2, 3, 5, 8, 13});
  // Constant recurrence stays constant.
  CHECK(linrec_mod({1}, {7}, 5, 2, 4) == std::vector<uint64_t>{7, 7, 7, 7, 7});
  // Negative coefficients are normalized: a(n) = 2a(n-1) - a(n-2) is the identity.
  std::vector<uint64_t> id = linrec_mod({2, -1}, {0, 1}, 10, 3, 2);
  for (uint64_t n = 0; n < 10; ++n) CHECK(id[n] == n % 9);
  CHECK_THROWS_AS(linrec_mod({1, 1}, {0}, 4, 2, 1), invalid_parameter);
}

TEST_CASE("period detection") {
  std::vector<uint64_t> fib2 = linrec_mod({1, 1}, {0, 1}, 32, 2, 1);
  auto [rho, lambda] = detect_period(fib2);
  CHECK(rho == 0);
  CHECK(lambda == 3);  // 0,1,1 repeats mod 2
  std::vector<uint64_t> pre{9, 8, 1, 2, 1, 2, 1, 2, 1, 2};
  auto [rho2, lambda2] = detect_period(pre);
  CHECK(rho2 == 2);
  CHECK(lambda2 == 2);
  CHECK_THROWS_AS(detect_period({1, 2, 3, 4, 5, 6}), invalid_parameter);
}

TEST_CASE("diagonal series") {
  // 1/(1-x-y): central binomial coefficients.
  RationalBivar f{parse_poly("1"), parse_poly("1 - x - y")};
  std::vector<uint64_t> d = diagonal_series(f, 5, 2, 20);
  CHECK(d == std::vector<uint64_t>{1, 2, 6, 20, 70});
  // P = Q = 1: the constant series.
  RationalBivar one{parse_poly("1"), parse_poly("1")};
  CHECK(diagonal_series(one, 4, 2, 3) == std::vector<uint64_t>{1, 0, 0, 0});
  // Catalan via the embedded rational function: Diag(G)(n+1) = C(n).
  RationalBivar g{parse_poly("y*(2*y - 1)"), parse_poly("x + y - 1")};
  std::vector<uint64_t> s = diagonal_series(g, 6, 2, 20);
  CHECK(s == std::vector<uint64_t>{0, 1, 1, 2, 5, 14});
  CHECK_THROWS_AS(diagonal_series(f, 513, 2, 1), budget_exceeded);
  RationalBivar bad{parse_poly("1"), parse_poly("2 - x")};
  CHECK_THROWS_AS(diagonal_series(bad, 4, 2, 3), invalid_parameter);
}

TEST_CASE("alpha = 0 series is identically zero") {
  RationalBivar f{parse_poly("1"), parse_poly("1 - x - y")};
  CHECK(diagonal_series(f, 3, 2, 0) == std::vector<uint64_t>{0, 0, 0});
}
