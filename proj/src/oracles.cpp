#include "padic/oracles.hpp"

#include <map>

namespace padic {

std::vector<uint64_t> catalan_mod(uint64_t n_terms, uint32_t p, uint32_t alpha) {
  if (n_terms > (uint64_t{1} << 15))
    throw budget_exceeded("catalan_mod: quadratic convolution budget is 2^15 terms");
  uint64_t mod = pow_checked(p, alpha);
  std::vector<uint64_t> c;
  c.reserve(n_terms);
  if (n_terms == 0) return c;
  c.push_back(1 % mod);
  for (uint64_t n = 1; n < n_terms; ++n) {
    unsigned __int128 acc = 0;
    for (uint64_t i = 0; i < n; ++i) acc += static_cast<unsigned __int128>(c[i]) * c[n - 1 - i];
    c.push_back(static_cast<uint64_t>(acc % mod));
  }
  return c;
}

std::vector<uint64_t> linrec_mod(const std::vector<int64_t>& coeffs,
                                 const std::vector<int64_t>& init, uint64_t n_terms,
                                 uint32_t p, uint32_t alpha) {
  uint64_t mod = pow_checked(p, alpha);
  if (init.size() < coeffs.size())
    throw invalid_parameter("linrec_mod: need at least as many initial terms as coefficients");
  auto norm = [&](int64_t v) {
    int64_t m = static_cast<int64_t>(mod);
    int64_t r = v % m;
    return static_cast<uint64_t>(r < 0 ? r + m : r);
  };
  std::vector<uint64_t> a;
  a.reserve(n_terms);
  for (size_t i = 0; i < init.size() && a.size() < n_terms; ++i) a.push_back(norm(init[i]));
  std::vector<uint64_t> cm;
  for (int64_t c : coeffs) cm.push_back(norm(c));
  while (a.size() < n_terms) {
    unsigned __int128 acc = 0;
    size_t n = a.size();
    for (size_t k = 0; k < cm.size(); ++k)
      acc += static_cast<unsigned __int128>(cm[k]) * a[n - 1 - k];
    a.push_back(static_cast<uint64_t>(acc % mod));
  }
  return a;
}

std::pair<uint64_t, uint64_t> detect_period(const std::vector<uint64_t>& seq) {
  size_t n = seq.size();
  for (uint64_t lambda = 1; lambda <= n / 2; ++lambda) {
    // Largest tail consistent with period lambda.
    size_t rho = n - lambda;
    while (rho > 0 && seq[rho - 1] == seq[rho - 1 + lambda]) --rho;
    if (rho + 2 * lambda <= n) return {rho, lambda};
  }
  throw invalid_parameter("detect_period: no period visible in the given window");
}

std::vector<uint64_t> diagonal_series(const RationalBivar& f, uint64_t n_terms,
                                      uint32_t p, uint32_t alpha) {
  if (n_terms > 512) throw budget_exceeded("diagonal_series: budget is 512 terms");
  uint64_t mod = pow_checked(p, alpha);
  BivarPoly P = reduce(f.num, mod);
  BivarPoly Q = reduce(f.den, mod);
  uint64_t q0 = static_cast<uint64_t>(Q.at_origin());
  if (alpha > 0 && q0 % p == 0)
    throw invalid_parameter("diagonal_series: denominator is not a unit at the origin");
  if (alpha == 0) return std::vector<uint64_t>(n_terms, 0);
  uint64_t q0inv = Residue(q0, p, alpha).inv_unit().value();

  // Solve Q * D = P for the truncated double series D.
  size_t N = static_cast<size_t>(n_terms);
  std::vector<std::vector<uint64_t>> D(N, std::vector<uint64_t>(N, 0));
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j) {
      uint64_t pc = static_cast<uint64_t>(P.coeff(static_cast<int64_t>(i), static_cast<int64_t>(j)));
      unsigned __int128 lower = 0;
      for (const auto& t : Q.terms) {
        if (t.i == 0 && t.j == 0) continue;
        if (t.i > static_cast<int64_t>(i) || t.j > static_cast<int64_t>(j)) continue;
        lower += static_cast<unsigned __int128>(t.c) * D[i - t.i][j - t.j];
      }
      uint64_t rhs = (pc + mod - static_cast<uint64_t>(lower % mod)) % mod;
      D[i][j] = mulmod(rhs, q0inv, mod);
    }
  std::vector<uint64_t> out;
  out.reserve(N);
  for (size_t n = 0; n < N; ++n) out.push_back(D[n][n]);
  return out;
}

}  // namespace padic
