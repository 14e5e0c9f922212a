#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "padic/diagonal.hpp"
#include "padic/oracles.hpp"

using namespace padic;

namespace {
const RationalBivar kBinom{parse_poly("1"), parse_poly("1 - x - y")};
const BivarPoly kCatalan = parse_poly("x*y^2 - y + 1");
}  // namespace

TEST_CASE("central binomials mod 2 vanish beyond n = 0") {
  Dfao m = diagonal_automaton(kBinom, 2, 1);
  CHECK(m.reading == Reading::LSD);
  CHECK(eval(m, 0) == 1);
  for (uint64_t n = 1; n < 256; ++n) CHECK(eval(m, n) == 0);
}

TEST_CASE("diagonal automaton matches the series oracle") {
  for (uint32_t p : {2u, 3u}) {
    for (uint32_t alpha : {1u, 2u, 3u}) {
      Dfao m = diagonal_automaton(kBinom, p, alpha);
      std::vector<uint64_t> want = diagonal_series(kBinom, 300, p, alpha);
      for (uint64_t n = 0; n < want.size(); ++n) CHECK(eval(m, n) == want[n]);
    }
  }
}

TEST_CASE("furstenberg embeds the catalan series") {
  FurstenbergResult fr = furstenberg(kCatalan, 2);
  CHECK(fr.shift == 1);
  std::vector<uint64_t> d = diagonal_series(fr.g, 9, 2, 20);
  std::vector<uint64_t> c = catalan_mod(8, 2, 20);
  for (uint64_t n = 0; n < 8; ++n) CHECK(d[n + fr.shift] == c[n]);
}

TEST_CASE("furstenberg rejects a ramified root") {
  // y^2 = x has no power-series solution with unit derivative mod 2.
  CHECK_THROWS_AS(furstenberg(parse_poly("y^2 - x"), 2), not_supported);
  CHECK_THROWS_AS(furstenberg(BivarPoly(), 2), invalid_parameter);
}

TEST_CASE("shift_compose") {
  Dfao m = diagonal_automaton(kBinom, 2, 3);
  CHECK(equal_behavior(shift_compose(m, 0), m));
  for (uint64_t c : {1ull, 2ull, 5ull}) {
    Dfao shifted = shift_compose(m, c);
    for (uint64_t n = 0; n < 512; ++n) CHECK(eval(shifted, n) == eval(m, n + c));
  }
}

TEST_CASE("qadic fast path agrees with the plain construction") {
  RationalBivar g = furstenberg(kCatalan, 2).g;
  CHECK(detail::qadic_eligible(reduce(g.den, 2)));
  for (uint32_t alpha : {1u, 2u, 3u, 4u}) {
    Dfao a = detail::diagonal_automaton_plain(g, 2, alpha);
    Dfao b = detail::diagonal_automaton_qadic(g, 2, alpha);
    CHECK(a.delta == b.delta);
    CHECK(a.outputs == b.outputs);
    CHECK(a.initial == b.initial);
  }
}

TEST_CASE("ineligible denominators fall back to the plain route") {
  RationalBivar f{parse_poly("1"), parse_poly("1 - x*y")};
  CHECK_FALSE(detail::qadic_eligible(reduce(f.den, 2)));
  Dfao m = diagonal_automaton(f, 2, 2);
  // Diag(1/(1-xy)) = 1: constant output 1.
  for (uint64_t n = 0; n < 64; ++n) CHECK(eval(m, n) == 1);
}

TEST_CASE("full algebraic pipeline on catalan mod 4") {
  Dfao m = algebraic_automaton(kCatalan, 2, 2);
  CHECK(m.reading == Reading::MSD);
  CHECK(m.num_states() == 6);
  CHECK(eval_prefix(m, 16) ==
        std::vector<uint64_t>{1, 1, 2, 1, 2, 2, 0, 1, 2, 2, 0, 2, 0, 0, 0, 1});
  std::vector<uint64_t> want = catalan_mod(1 << 12, 2, 2);
  for (uint64_t n = 0; n < want.size(); ++n) CHECK(eval(m, n) == want[n]);
  CHECK(minimize(m).first.num_states() == 6);
}

TEST_CASE("catalan mod 2 has the three-state machine") {
  Dfao m = algebraic_automaton(kCatalan, 2, 1);
  CHECK(m.num_states() == 3);
  std::vector<uint64_t> want = catalan_mod(1 << 12, 2, 1);
  for (uint64_t n = 0; n < want.size(); ++n) CHECK(eval(m, n) == want[n]);
}

TEST_CASE("precision coherence under reduction") {
  Dfao m3 = algebraic_automaton(kCatalan, 2, 3);
  Dfao m2 = algebraic_automaton(kCatalan, 2, 2);
  for (uint64_t n = 0; n < 2048; ++n) CHECK(eval(m3, n) % 4 == eval(m2, n));
}
