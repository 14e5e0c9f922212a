#ifndef PADIC_TOWER_HPP
#define PADIC_TOWER_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "padic/cocycle.hpp"
#include "padic/dfao.hpp"
#include "padic/substitution.hpp"

namespace padic {

// One ingestion path for every sequence the tower builder understands.
struct SequenceSpec {
  enum class Kind { Algebraic, Diagonal, Linrec, Cocycle, Oracle };
  Kind kind = Kind::Algebraic;
  std::string annihilator;            // algebraic: infix text like "x*y^2 - y + 1"
  std::string num, den;               // diagonal: P and Q
  std::vector<int64_t> coeffs, init;  // linrec: a(n) = sum coeffs[k] a(n-1-k)
  std::string theta_words;            // cocycle: "01;10" permutation words
  std::vector<uint64_t> values;       // oracle kind: explicit values only
  std::string oracle;                 // optional named oracle ("catalan")

  std::string to_json() const;
  static SequenceSpec from_json(const std::string& text);
};

struct TowerLevel {
  uint32_t alpha = 0;
  Dfao machine;        // minimal direct-reading, outputs mod p^alpha
  Dfao state_machine;  // state-valued twin
  Substitution theta;  // extracted substitution with coding tau
};

// Compatible family {M_alpha, theta_alpha, proj} for alpha = 1..top.
// proj[i] maps states of levels[i+1] onto states of levels[i].
struct Tower {
  uint32_t p = 2;
  uint32_t top = 0;
  std::vector<TowerLevel> levels;
  std::vector<std::vector<int>> proj;

  const TowerLevel& level(uint32_t alpha) const;

  std::string to_json() const;
  static Tower from_json(const std::string& text);
};

// Brute-force reference values for the spec, n < window (window shrinks to
// the series-oracle budget for diagonal specs).
std::vector<uint64_t> oracle_sequence(const SequenceSpec& spec, uint32_t p, uint32_t alpha,
                                      uint64_t window);

// Builds the top-level machine, derives the lower levels by output
// projection + minimization, validates every level against the oracle, and
// links adjacent levels with projection_map.
Tower build_tower(const SequenceSpec& spec, uint32_t p, uint32_t top);

// State map from m_high onto m_low: project m_high's outputs mod m_low's
// modulus, minimize with merge tracking, match the result to m_low by the
// initial-rooted isomorphism.
std::vector<int> projection_map(const Dfao& m_high, const Dfao& m_low);

struct VerifyItem {
  std::string name;
  bool pass = true;
  std::string witness;
};
struct VerifyReport {
  std::vector<VerifyItem> items;
  bool all_pass() const;
};

// The commuting-diagram identities: state-map invariants over states x
// digits, letterwise substitution compatibility, sequence-prefix
// projection, and shift commutation on the prefix.
VerifyReport verify_tower(const Tower& t, uint64_t n);

// Level alpha holds exactly the residues the sequence attains mod p^alpha;
// the parent of j at level alpha is j mod p^{alpha-1}. Level 0 is {0}.
struct ResidueTree {
  uint32_t p = 2;
  std::vector<std::vector<uint64_t>> levels;  // sorted, index = alpha
};

ResidueTree residue_tree(const Tower& t);
std::set<uint64_t> forbidden_residues(const Tower& t, uint32_t alpha);
std::string residue_tree_to_dot(const ResidueTree& tree);
std::string residue_tree_to_json(const ResidueTree& tree);

// One refinement step of an inverse-limit letter: the level alpha+1 states
// projecting onto the given level alpha state.
std::set<int> letter_preimages(const Tower& t, uint32_t alpha, int state);

}  // namespace padic

#endif
