#ifndef PADIC_DIAGONAL_HPP
#define PADIC_DIAGONAL_HPP

#include "padic/bivar.hpp"
#include "padic/dfao.hpp"

namespace padic {

// LSD automaton with eval(m, n) = [x^n y^n] P/Q mod p^alpha. States are
// bivariate polynomials S with the semantics
//   v_S(n) = [x^n y^n] S / Q^{p^{alpha-1}}  (mod p^alpha),
// explored by BFS under the Cartier transitions
//   S -> Lambda_{r,r}(S * Q^{p^{alpha-1}(p-1)}).
// The result is validated against the truncated-series oracle before it is
// returned; a mismatch aborts with a diagnostic.
Dfao diagonal_automaton(const RationalBivar& f, uint32_t p, uint32_t alpha);

struct FurstenbergResult {
  RationalBivar g;
  uint32_t shift = 1;  // Diag(g)(n + shift) = [x^n] f
};

// Embeds the algebraic series f with annihilator P(x, f) = 0 as the
// diagonal of a bivariate rational function, via g = x*f.
FurstenbergResult furstenberg(const BivarPoly& annihilator, uint32_t p);

// eval(result, n) = eval(m, n + c): product of m with the base-p +c carry
// transducer. Requires a zero-invariant LSD machine.
Dfao shift_compose(const Dfao& m, uint64_t c);

// Full pipeline: furstenberg -> diagonal_automaton -> shift_compose ->
// reverse_reading -> minimize. The result generates (a(n) mod p^alpha) in
// direct reading and is minimal.
Dfao algebraic_automaton(const BivarPoly& annihilator, uint32_t p, uint32_t alpha);

namespace detail {

// Reference construction with fully expanded polynomial states. Cost grows
// quickly with alpha; kept as the second route for cross-validation.
Dfao diagonal_automaton_plain(const RationalBivar& f, uint32_t p, uint32_t alpha);

// Q-adic fast path: states held as sums of univariate digits times powers
// of Q. Produces the identical automaton when eligible (Q monic linear in
// y with a univariate x-part).
bool qadic_eligible(const BivarPoly& q_reduced);
Dfao diagonal_automaton_qadic(const RationalBivar& f, uint32_t p, uint32_t alpha);

}  // namespace detail

}  // namespace padic

#endif
