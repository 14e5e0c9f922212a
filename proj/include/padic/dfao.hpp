#ifndef PADIC_DFAO_HPP
#define PADIC_DFAO_HPP

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "padic/residue.hpp"

namespace padic {

enum class Reading { MSD, LSD };

// Deterministic finite automaton with output over the digit alphabet
// {0, ..., p-1}. Outputs are either residues mod p^out_alpha or abstract
// letters (when residue_output is false the output alphabet is the state
// set itself, or arbitrary tags). Immutable by convention: operations
// return fresh automata.
struct Dfao {
  uint32_t p = 2;
  Reading reading = Reading::MSD;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // delta[state][digit]
  std::vector<uint64_t> outputs;        // one per state
  bool residue_output = true;
  uint32_t out_alpha = 0;  // modulus exponent when residue_output
  bool zero_invariant = false;

  int num_states() const { return static_cast<int>(delta.size()); }
  void validate() const;  // totality, ranges

  std::string to_json() const;
  static Dfao from_json(const std::string& text);
};

// tau(delta(s0, digits of n)); n = 0 reads the empty word.
uint64_t eval(const Dfao& m, uint64_t n);

std::vector<uint64_t> eval_prefix(const Dfao& m, uint64_t n);

// Restrict to states reachable from the initial state (BFS in digit order,
// so the numbering is canonical). Second component maps old -> new index,
// -1 for dropped states.
std::pair<Dfao, std::vector<int>> prune(const Dfao& m);

// Moore partition refinement seeded by the output partition. The result is
// renumbered canonically by BFS from the initial state; merge_map sends each
// input state to its class (-1 if unreachable from the initial state).
std::pair<Dfao, std::vector<int>> minimize(const Dfao& m);

// Exact behavioural equality on all n, decided by product reachability over
// canonical digit strings (never by sampling).
bool equal_behavior(const Dfao& m1, const Dfao& m2);

// Checks that padding (leading zeros for MSD, trailing zeros for LSD) does
// not change any output; exact.
bool is_zero_invariant(const Dfao& m);

// For an MSD machine with delta(s0,0) != s0 behaviourally, add a fresh
// initial state absorbing leading zeros. No-op when already invariant.
Dfao pad_close(const Dfao& m);

// Transformation-based reversal: the MSD states are the maps
// s -> tau(run of the LSD machine from s on the digits read so far).
// Requires an LSD, zero-invariant input; result is pruned and minimized.
Dfao reverse_reading(const Dfao& m);

// Exactly { output(n) : n >= 0 }, by reachability over canonical strings.
std::set<uint64_t> reachable_outputs(const Dfao& m);

// Same transitions, identity outputs (the state-valued twin M*).
Dfao state_valued(const Dfao& m);

std::string to_dot(const Dfao& m);

}  // namespace padic

#endif
