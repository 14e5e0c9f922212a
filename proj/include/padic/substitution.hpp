#ifndef PADIC_SUBSTITUTION_HPP
#define PADIC_SUBSTITUTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "padic/dfao.hpp"

namespace padic {

// Length-p substitution on letters {0, ..., m-1} with an optional
// letter-to-letter coding. images[l] has length exactly p and
// images[seed][0] == seed, so the fixed point from the seed exists.
struct Substitution {
  uint32_t p = 2;
  std::vector<std::string> alphabet;         // display names, one per letter
  std::vector<std::vector<int>> images;      // images[letter][position]
  int seed = 0;
  bool has_coding = false;
  std::vector<uint64_t> coding;              // letter -> output, when present
  bool coding_residue = false;               // coded outputs are residues
  uint32_t coding_alpha = 0;                 // their modulus exponent

  int num_letters() const { return static_cast<int>(images.size()); }
  void validate() const;

  std::string to_json() const;
  static Substitution from_json(const std::string& text);
};

// M[i][j] = occurrences of letter i in images[j]; column sums equal p.
using IncidenceMatrix = std::vector<std::vector<uint64_t>>;

// theta(s) = delta(s,0) delta(s,1) ... delta(s,p-1) on the machine's
// states, with coding tau = outputs. When delta(s0,0) != s0 a fresh seed
// letter s0' with image s0' delta(s0,1) ... is added.
Substitution cobham_extract(const Dfao& m);

// Prefix of length n of the coded (or raw, when uncoded) fixed point.
std::vector<uint64_t> fixed_point(const Substitution& s, uint64_t n);
std::vector<int> fixed_point_letters(const Substitution& s, uint64_t n);

// states = letters, initial = seed, delta(l, r) = images[l][r]; the
// inverse of cobham_extract up to behavioural equality.
Dfao dfao_from_substitution(const Substitution& s);

IncidenceMatrix incidence(const Substitution& s);

// Some boolean power M^k (k within the Wielandt bound) entrywise positive.
bool is_primitive(const IncidenceMatrix& m);

// Perron fixed point of the column-stochastic M/p by power iteration.
std::vector<double> letter_frequencies(const Substitution& s, double tol = 1e-12);

}  // namespace padic

#endif
