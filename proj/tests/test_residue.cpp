#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "padic/residue.hpp"

using namespace padic;

TEST_CASE("primality by trial division") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(65521));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(65535));
}

TEST_CASE("pow_checked stays within one word") {
  CHECK(pow_checked(2, 0) == 1);
  CHECK(pow_checked(2, 12) == 4096);
  CHECK(pow_checked(3, 5) == 243);
  CHECK(pow_checked(2, 62) == (uint64_t{1} << 62));
  CHECK_THROWS_AS(pow_checked(2, 63), budget_exceeded);
  CHECK_THROWS_AS(pow_checked(3, 40), budget_exceeded);
}

TEST_CASE("modular helpers") {
  CHECK(mulmod(3, 4, 5) == 2);
  // 64-bit-overflowing product handled via 128-bit accumulation.
  uint64_t big = (uint64_t{1} << 61) - 1;
  CHECK(mulmod(big, big, big + 2) == powmod(big, 2, big + 2));
  CHECK(powmod(2, 10, 1000) == 24);
  CHECK(powmod(7, 0, 13) == 1);
}

TEST_CASE("residue ring arithmetic") {
  Residue a(5, 2, 3), b(6, 2, 3);
  CHECK(a.modulus() == 8);
  CHECK(a.add(b).value() == 3);
  CHECK(a.sub(b).value() == 7);
  CHECK(a.mul(b).value() == 6);
  CHECK(a.project(1).value() == 1);
  CHECK(a.project(2).value() == 1);
  CHECK(Residue(3, 2, 3).inv_unit().value() == 3);  // 3*3 = 9 = 1 mod 8
  CHECK(Residue(5, 3, 4).inv_unit().mul(Residue(5, 3, 4)).value() == 1);
  CHECK_THROWS_AS(Residue(2, 2, 3).inv_unit(), not_invertible);
}

TEST_CASE("alpha = 0 is the trivial ring") {
  Residue z(0, 2, 0);
  CHECK(z.value() == 0);
  CHECK(z.modulus() == 1);
  CHECK(z.add(Residue(0, 2, 0)).value() == 0);
  // Values must arrive canonical; the trivial ring only holds 0.
  CHECK_THROWS_AS(Residue(7, 2, 0), invalid_parameter);
}

TEST_CASE("residue JSON round trip") {
  Residue a(5, 2, 3);
  Residue b = Residue::from_json(a.to_json());
  CHECK(a == b);
}

TEST_CASE("mismatched moduli rejected") {
  CHECK_THROWS_AS(Residue(1, 2, 3).add(Residue(1, 2, 4)), invalid_parameter);
  CHECK_THROWS_AS(Residue(1, 2, 3).mul(Residue(1, 3, 3)), invalid_parameter);
}

TEST_CASE("MSD digit strings are canonical") {
  CHECK(digits_msd(0, 2).digits.empty());
  DigitString d = digits_msd(11, 2);
  CHECK(d.digits == std::vector<uint8_t>{1, 0, 1, 1});
  CHECK(d.canonical());
  CHECK(d.value() == 11);
  DigitString t = digits_msd(11, 3);
  CHECK(t.digits == std::vector<uint8_t>{1, 0, 2});
  CHECK(t.value() == 11);
}

TEST_CASE("truncated p-adics") {
  TruncatedPadic x = truncated_from_value(11, 2, 5);
  CHECK(x.precision() == 5);
  CHECK(x.digits == std::vector<uint8_t>{1, 1, 0, 1, 0});
  CHECK(x.value() == 11);
  TruncatedPadic y = x.project(3);
  CHECK(y.precision() == 3);
  CHECK(y.value() == 3);
  CHECK(truncated_from_value(3, 2, 3) == y);
}
