#ifndef PADIC_DYNAMICS_HPP
#define PADIC_DYNAMICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "padic/tower.hpp"

namespace padic {

// Outcome of following a(k p^m + r) as m grows: either a single p-adic
// limit truncated at the tower's top precision, or a periodic orbit of
// values (period >= 2) listed from the entry point of the 0-cycle.
struct LimitResult {
  bool is_limit = true;
  TruncatedPadic value;
  uint64_t period = 1;
  std::vector<TruncatedPadic> values;
};

LimitResult padic_limit(const Tower& t, uint64_t k, uint64_t r);

// Row m holds the base-p digits of a(k p^m + r) mod p^width, least
// significant digit at the right edge.
struct DigitGrid {
  uint32_t p = 2;
  uint32_t width = 0;
  std::vector<std::vector<uint32_t>> rows;  // rows[m][c], c = 0 leftmost

  std::string to_pbm() const;   // P1 text bitmap, nonzero digits black
  std::string to_json() const;
};

DigitGrid digit_grid(const Tower& t, uint64_t k, uint64_t r, uint64_t rows, uint32_t width);

}  // namespace padic

#endif
