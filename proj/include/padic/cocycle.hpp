#ifndef PADIC_COCYCLE_HPP
#define PADIC_COCYCLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "padic/substitution.hpp"

namespace padic {

// Stationary Bratteli diagram with the all-ones incidence matrix on p
// vertices, ordered by a substitution theta whose images are permutation
// words: the edge into vertex j with source theta(j)[k] has rank k.
// theta(0) must start with 0 so the all-zero path is minimal.
struct OrderedDiagram {
  uint32_t p = 2;
  std::vector<std::vector<int>> theta;  // theta[j] is a permutation word

  void validate() const;
  int edge_rank(int source, int target) const;  // index of source in theta[target]

  // Parses "01;10" style: semicolon-joined permutation words, one digit
  // per letter (p <= 10).
  static OrderedDiagram parse(uint32_t p, const std::string& words);
};

// Path through the diagram as its vertex labels v_0, v_1, ...; levels at
// and below the stored depth continue through vertex 0, which is minimal.
struct AdicPath {
  std::vector<int> v;

  int vertex(size_t level) const {
    return level < v.size() ? v[level] : 0;
  }
};

// The odometer diagram theta*(j) = 01...(p-1).
OrderedDiagram odometer_diagram(uint32_t p);

// Successor in the theta-order: bump the lowest non-maximal edge and make
// everything under it minimal. Depth grows lazily up to depth_cap.
AdicPath vershik_successor(const OrderedDiagram& d, const AdicPath& x,
                           size_t depth_cap = 64);

// s(n) = sum_j v_j p^j over the vertex labels of the n-th successor of the
// all-zero path.
std::vector<uint64_t> cocycle_sequence(const OrderedDiagram& d, uint64_t n);

// theta_alpha(j) = theta(j mod p) + p (j mod p^{alpha-1}), entrywise, on
// the alphabet Z/p^alpha; its fixed point is (s(n) mod p^alpha).
Substitution cocycle_substitution(const OrderedDiagram& d, uint32_t alpha);

struct CocycleReport {
  bool pass = true;
  uint64_t index = 0;   // first mismatch when !pass
  std::string detail;
};

// fixed_point(cocycle_substitution(d, alpha), n) vs cocycle_sequence mod
// p^alpha.
CocycleReport verify_cocycle(const OrderedDiagram& d, uint32_t alpha, uint64_t n);

// The four Thue-Morse identities s(4n) = -2s(n) + 3s(2n), etc., for n < n_max;
// s must cover indices up to 4 n_max - 1.
CocycleReport regular_recurrence_check(const std::vector<uint64_t>& s, uint64_t n_max);

}  // namespace padic

#endif
