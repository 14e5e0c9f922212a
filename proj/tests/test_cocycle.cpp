#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "padic/cocycle.hpp"

using namespace padic;

namespace {
OrderedDiagram tm_diagram() { return OrderedDiagram::parse(2, "01;10"); }
}  // namespace

TEST_CASE("diagram parsing and validation") {
  OrderedDiagram d = tm_diagram();
  CHECK(d.p == 2);
  CHECK(d.theta == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  CHECK(d.edge_rank(1, 0) == 1);
  CHECK(d.edge_rank(1, 1) == 0);
  // theta(0) must start with 0.
  CHECK_THROWS_AS(OrderedDiagram::parse(2, "10;01"), invalid_parameter);
  // Words must be permutations.
  CHECK_THROWS_AS(OrderedDiagram::parse(2, "00;10"), invalid_parameter);
  CHECK_THROWS_AS(OrderedDiagram::parse(2, "01"), invalid_parameter);
  CHECK_THROWS_AS(OrderedDiagram::parse(3, "012;01;120"), invalid_parameter);
}

TEST_CASE("thue-morse cocycle values") {
  std::vector<uint64_t> s = cocycle_sequence(tm_diagram(), 16);
  CHECK(s == std::vector<uint64_t>{0, 1, 3, 2, 7, 6, 4, 5, 15, 14, 12, 13, 8, 9, 11, 10});
}

TEST_CASE("odometer cocycle is the identity") {
  for (uint32_t p : {2u, 3u, 5u}) {
    std::vector<uint64_t> s = cocycle_sequence(odometer_diagram(p), 200);
    for (uint64_t n = 0; n < 200; ++n) CHECK(s[n] == n);
  }
}

TEST_CASE("cocycle blocks are bijections") {
  // The first p^D values enumerate 0..p^D-1 for every order.
  for (const char* words : {"01;01", "01;10"}) {
    OrderedDiagram d = OrderedDiagram::parse(2, words);
    for (size_t depth = 1; depth <= 8; ++depth) {
      uint64_t block = uint64_t{1} << depth;
      std::vector<uint64_t> s = cocycle_sequence(d, block);
      std::sort(s.begin(), s.end());
      for (uint64_t i = 0; i < block; ++i) CHECK(s[i] == i);
    }
  }
}

TEST_CASE("vershik successor and depth cap") {
  OrderedDiagram d = tm_diagram();
  AdicPath zero;
  AdicPath one = vershik_successor(d, zero);
  CHECK(one.vertex(0) == 1);
  // All-maximal prefix forces a carry past the cap.
  OrderedDiagram od = odometer_diagram(2);
  AdicPath maxed;
  maxed.v = {1, 1, 1};
  CHECK_THROWS_AS(vershik_successor(od, maxed, 3), needs_deeper_path);
  AdicPath bumped = vershik_successor(od, maxed, 8);
  CHECK(bumped.vertex(0) == 0);
  CHECK(bumped.vertex(3) == 1);
}

TEST_CASE("substitution images mod 4 for thue-morse") {
  Substitution s = cocycle_substitution(tm_diagram(), 2);
  CHECK(s.num_letters() == 4);
  CHECK(s.images == std::vector<std::vector<int>>{{0, 1}, {3, 2}, {0, 1}, {3, 2}});
  CHECK(s.seed == 0);
}

TEST_CASE("verify_cocycle on every p = 2 order") {
  for (const char* words : {"01;01", "01;10"}) {
    OrderedDiagram d = OrderedDiagram::parse(2, words);
    for (uint32_t alpha = 1; alpha <= 8; ++alpha) {
      CocycleReport rep = verify_cocycle(d, alpha, 4096);
      INFO(words, " alpha=", alpha, " ", rep.detail);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("verify_cocycle on p = 3 samples") {
  for (const char* words : {"012;012;012", "012;120;201", "012;210;102"}) {
    OrderedDiagram d = OrderedDiagram::parse(3, words);
    CocycleReport rep = verify_cocycle(d, 4, 2000);
    INFO(words, " ", rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("thue-morse regular recurrences") {
  std::vector<uint64_t> s = cocycle_sequence(tm_diagram(), 40000);
  CHECK(regular_recurrence_check(s, 10000).pass);
  // The odometer violates them: s(4n+2) = 4n+2 but the identity wants 4n+3.
  std::vector<uint64_t> id = cocycle_sequence(odometer_diagram(2), 40);
  CocycleReport rep = regular_recurrence_check(id, 10);
  CHECK_FALSE(rep.pass);
  CHECK(rep.index == 2);
  // A corrupted value is caught with its index.
  std::vector<uint64_t> bad = cocycle_sequence(tm_diagram(), 400);
  bad[37] ^= 1;
  CHECK_FALSE(regular_recurrence_check(bad, 100).pass);
  CHECK_THROWS_AS(regular_recurrence_check(id, 100), invalid_parameter);
}
