#ifndef PADIC_ORACLES_HPP
#define PADIC_ORACLES_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "padic/bivar.hpp"
#include "padic/residue.hpp"

namespace padic {

// Division-free Catalan convolution C(n+1) = sum C(i) C(n-i), mod p^alpha.
std::vector<uint64_t> catalan_mod(uint64_t n_terms, uint32_t p, uint32_t alpha);

// a(n) = sum coeffs[k] * a(n-1-k), seeded by init; all mod p^alpha.
std::vector<uint64_t> linrec_mod(const std::vector<int64_t>& coeffs,
                                 const std::vector<int64_t>& init, uint64_t n_terms,
                                 uint32_t p, uint32_t alpha);

// (preperiod, period) of a sequence, by brute-force scan.
std::pair<uint64_t, uint64_t> detect_period(const std::vector<uint64_t>& seq);

// [x^n y^n] P/Q mod p^alpha for n < n_terms, by truncated series division.
std::vector<uint64_t> diagonal_series(const RationalBivar& f, uint64_t n_terms,
                                      uint32_t p, uint32_t alpha);

}  // namespace padic

#endif
