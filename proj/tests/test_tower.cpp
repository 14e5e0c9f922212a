#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "padic/oracles.hpp"
#include "padic/tower.hpp"

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

}  // namespace

TEST_CASE("catalan tower mod 4") {
  Tower t = build_tower(catalan_spec(), 2, 2);
  CHECK(t.top == 2);
  CHECK(t.levels.size() == 2);
  CHECK(t.level(1).machine.num_states() == 3);
  CHECK(t.level(2).machine.num_states() == 6);
  CHECK(t.level(2).theta.num_letters() == 6);
  CHECK_THROWS_AS(t.level(0), invalid_parameter);
  CHECK_THROWS_AS(t.level(3), invalid_parameter);
}

TEST_CASE("projection groups the mod-4 states onto the mod-2 states") {
  Tower t = build_tower(catalan_spec(), 2, 2);
  const std::vector<int>& pi = t.proj[0];
  CHECK(pi.size() == 6);
  // tau mod 2 splits {s0,s1,s3} from {s2,s4,s5}; transition refinement then
  // separates s0, leaving {s0}, {s1,s3}, {s2,s4,s5}.
  CHECK(pi[1] == pi[3]);
  CHECK(pi[2] == pi[4]);
  CHECK(pi[2] == pi[5]);
  CHECK(pi[0] != pi[1]);
  CHECK(pi[0] != pi[2]);
  CHECK(pi[1] != pi[2]);
  // It really is a machine morphism rooted at the initial states.
  const Dfao& hi = t.level(2).machine;
  const Dfao& lo = t.level(1).machine;
  CHECK(pi[hi.initial] == lo.initial);
  for (int s = 0; s < hi.num_states(); ++s) {
    CHECK(hi.outputs[s] % 2 == lo.outputs[pi[s]]);
    for (uint32_t d = 0; d < 2; ++d) CHECK(pi[hi.delta[s][d]] == lo.delta[pi[s]][d]);
  }
}

TEST_CASE("verify_tower passes on a freshly built tower") {
  Tower t = build_tower(catalan_spec(), 2, 4);
  VerifyReport rep = verify_tower(t, 4096);
  for (const auto& item : rep.items) {
    INFO(item.name, ": ", item.witness);
    CHECK(item.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("verify_tower catches an injected fault with a witness") {
  Tower t = build_tower(catalan_spec(), 2, 2);
  t.proj[0][3] = t.proj[0][2];  // break the state map
  VerifyReport rep = verify_tower(t, 256);
  CHECK_FALSE(rep.all_pass());
  bool witnessed = false;
  for (const auto& item : rep.items)
    if (!item.pass && !item.witness.empty()) witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("identity towers over p = 2 and p = 3") {
  for (uint32_t p : {2u, 3u}) {
    Tower t = build_tower(identity_spec(), p, 5);
    VerifyReport rep = verify_tower(t, 4096);
    CHECK(rep.all_pass());
    for (uint32_t a = 1; a <= 5; ++a) {
      const Dfao& m = t.level(a).machine;
      uint64_t mod = pow_checked(p, a);
      for (uint64_t n = 0; n < 200; ++n) CHECK(eval(m, n) == n % mod);
    }
  }
}

TEST_CASE("residue tree of the catalan sequence") {
  Tower t = build_tower(catalan_spec(), 2, 4);
  ResidueTree rt = residue_tree(t);
  CHECK(rt.levels.size() == 5);
  CHECK(rt.levels[0] == std::vector<uint64_t>{0});
  CHECK(rt.levels[1] == std::vector<uint64_t>{0, 1});
  CHECK(rt.levels[2].size() == 3);
  CHECK(rt.levels[4].size() == 11);
  CHECK(forbidden_residues(t, 2) == std::set<uint64_t>{3});
  std::set<uint64_t> f4 = forbidden_residues(t, 4);
  CHECK(f4.count(9) == 1);
  std::string dot = residue_tree_to_dot(rt);
  CHECK(dot.find("digraph") != std::string::npos);
}

TEST_CASE("letter preimages refine along the tower") {
  Tower t = build_tower(catalan_spec(), 2, 2);
  std::set<int> all;
  for (int s = 0; s < t.level(1).machine.num_states(); ++s) {
    std::set<int> pre = letter_preimages(t, 1, s);
    CHECK_FALSE(pre.empty());
    all.insert(pre.begin(), pre.end());
  }
  CHECK(static_cast<int>(all.size()) == t.level(2).machine.num_states());
  CHECK_THROWS_AS(letter_preimages(t, 2, 0), invalid_parameter);
}

TEST_CASE("oracle_sequence dispatch") {
  SequenceSpec s = catalan_spec();
  CHECK(oracle_sequence(s, 2, 2, 8) == std::vector<uint64_t>{1, 1, 2, 1, 2, 2, 0, 1});
  s.oracle.clear();  // series route, shorter window but same values
  std::vector<uint64_t> v = oracle_sequence(s, 2, 2, 64);
  CHECK(v == catalan_mod(v.size(), 2, 2));
  SequenceSpec raw;
  raw.kind = SequenceSpec::Kind::Oracle;
  raw.values = {1, 0, 1, 0};
  CHECK(oracle_sequence(raw, 2, 1, 4) == raw.values);
  CHECK_THROWS_AS(build_tower(raw, 2, 1), invalid_parameter);
}

TEST_CASE("tower JSON round trip") {
  Tower t = build_tower(catalan_spec(), 2, 2);
  Tower back = Tower::from_json(t.to_json());
  CHECK(back.p == t.p);
  CHECK(back.top == t.top);
  CHECK(back.proj == t.proj);
  for (uint32_t a = 1; a <= 2; ++a) {
    CHECK(back.level(a).machine.delta == t.level(a).machine.delta);
    CHECK(back.level(a).machine.outputs == t.level(a).machine.outputs);
    CHECK(back.level(a).theta.images == t.level(a).theta.images);
  }
  CHECK(verify_tower(back, 256).all_pass());
  SequenceSpec spec = SequenceSpec::from_json(catalan_spec().to_json());
  CHECK(spec.annihilator == "x*y^2 - y + 1");
  CHECK(spec.oracle == "catalan");
}

TEST_CASE("top = 0 gives the empty tower") {
  Tower t = build_tower(catalan_spec(), 2, 0);
  CHECK(t.top == 0);
  CHECK(t.levels.empty());
  CHECK(verify_tower(t, 16).all_pass());
}
