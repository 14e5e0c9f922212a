#include "padic/diagonal.hpp"

#include <deque>
#include <map>

#include "padic/oracles.hpp"

namespace padic {

namespace {

Dfao trivial_ring_automaton(uint32_t p, Reading reading) {
  Dfao m;
  m.p = p;
  m.reading = reading;
  m.initial = 0;
  m.delta = {std::vector<int>(p, 0)};
  m.outputs = {0};
  m.residue_output = true;
  m.out_alpha = 0;
  m.zero_invariant = true;
  return m;
}

void finish_lsd(Dfao& m, const RationalBivar& f, uint32_t p, uint32_t alpha) {
  if (!is_zero_invariant(m))
    throw internal_error("diagonal_automaton: result not trailing-zero invariant");
  m.zero_invariant = true;

  // Oracle grounding before the machine escapes.
  uint64_t window = 256;
  auto expected = diagonal_series(f, window, p, alpha);
  for (uint64_t n = 0; n < window; ++n)
    if (eval(m, n) != expected[n])
      throw construction_error("diagonal_automaton: oracle mismatch at n=" + std::to_string(n) +
                               " (got " + std::to_string(eval(m, n)) + ", series gives " +
                               std::to_string(expected[n]) + ")");
}

void check_degree_bound(int64_t dx, int64_t dy, int64_t bound, uint32_t alpha) {
  if (dx > bound || dy > bound)
    throw internal_error("diagonal_automaton: state degree " + std::to_string(dx) + "," +
                         std::to_string(dy) + " exceeds the proven bound " +
                         std::to_string(bound) + " at alpha=" + std::to_string(alpha));
}

}  // namespace

namespace detail {

Dfao diagonal_automaton_plain(const RationalBivar& f, uint32_t p, uint32_t alpha) {
  if (!is_prime(p)) throw invalid_parameter("p must be prime");
  if (alpha == 0) return trivial_ring_automaton(p, Reading::LSD);
  uint64_t mod = pow_checked(p, alpha);
  BivarPoly P = reduce(f.num, mod);
  BivarPoly Q = reduce(f.den, mod);
  uint64_t q0 = static_cast<uint64_t>(Q.at_origin());
  if (q0 % p == 0)
    throw invalid_parameter("diagonal_automaton: denominator is not a unit at the origin");

  uint64_t e = pow_checked(p, alpha - 1);
  BivarPoly q_pow_em1 = pow(Q, e - 1, mod);              // Q^{e-1}
  BivarPoly transition_mult = pow(Q, e * (p - 1), mod);  // Q^{e(p-1)}
  BivarPoly s0 = mul(P, q_pow_em1, mod);
  uint64_t out_scale = Residue(powmod(q0, e, mod), p, alpha).inv_unit().value();

  int64_t d = std::max(Q.deg_x(), Q.deg_y());
  int64_t degree_bound =
      std::max<int64_t>(std::max(s0.deg_x(), s0.deg_y()), d * static_cast<int64_t>(e)) +
      d * static_cast<int64_t>(e);

  std::map<BivarPoly, int> index;
  std::vector<BivarPoly> states;
  std::deque<int> queue;
  index.emplace(s0, 0);
  states.push_back(s0);
  queue.push_back(0);

  std::vector<std::vector<int>> delta;
  std::vector<uint64_t> outputs;
  constexpr size_t kStateCap = size_t{1} << 18;
  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    if (static_cast<size_t>(si) >= delta.size()) {
      delta.resize(si + 1);
      outputs.resize(si + 1);
    }
    BivarPoly state = states[si];
    outputs[si] = mulmod(static_cast<uint64_t>(state.at_origin()), out_scale, mod);
    BivarPoly product = mul(state, transition_mult, mod);
    delta[si].resize(p);
    for (uint32_t r = 0; r < p; ++r) {
      BivarPoly next = cartier(product, r, r, p);
      check_degree_bound(next.deg_x(), next.deg_y(), degree_bound, alpha);
      auto [it, fresh] = index.emplace(next, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(next);
        queue.push_back(it->second);
        if (states.size() > kStateCap)
          throw budget_exceeded("diagonal_automaton: state explosion");
      }
      delta[si][r] = it->second;
    }
  }

  Dfao m;
  m.p = p;
  m.reading = Reading::LSD;
  m.initial = 0;
  m.delta = std::move(delta);
  m.outputs = std::move(outputs);
  m.residue_output = true;
  m.out_alpha = alpha;
  finish_lsd(m, f, p, alpha);
  return m;
}

bool qadic_eligible(const BivarPoly& q_reduced) {
  // Need Q = u*y + c(x) with constant u: monic-linear shape in y.
  bool has_y = false;
  for (const auto& t : q_reduced.terms) {
    if (t.j == 0) continue;
    if (t.j > 1 || t.i > 0) return false;
    has_y = true;
  }
  return has_y;
}

namespace {

// Univariate polynomial in x, dense, coefficients in [0, mod).
using Univar = std::vector<uint64_t>;

void univar_trim(Univar& u) {
  while (!u.empty() && u.back() == 0) u.pop_back();
}

// Dense bivariate polynomial as rows by y-degree; rows[j][i] is the
// coefficient of x^i y^j. The qadic working polynomials have y-degree
// bounded by alpha + p, so this stays small.
using RowPoly = std::vector<Univar>;

void rows_trim(RowPoly& a) {
  for (auto& row : a) univar_trim(row);
  while (!a.empty() && a.back().empty()) a.pop_back();
}

bool rows_zero(const RowPoly& a) {
  for (const auto& row : a)
    for (uint64_t c : row)
      if (c != 0) return false;
  return true;
}

// A state is the polynomial sum_t digit[t](x) * Q^t; the digits are the
// unique Q-adic digits (remainders of iterated division by Q), so two
// states compare equal exactly when the underlying polynomials do.
using QState = std::vector<std::pair<int64_t, Univar>>;

struct QadicCtx {
  uint32_t p;
  uint32_t alpha;
  uint64_t mod;
  uint64_t e;
  uint64_t phi;                // p^{alpha-1} (p-1), for unit inverses
  uint64_t y_coeff_inv;        // inverse of the y coefficient of Q
  Univar c;                    // Q = y_coeff*y + c(x)
  uint64_t q00;                // Q(0, 0)
  std::vector<RowPoly> q_small_pow;  // Q^par for par < p
  RowPoly frob_defect;               // R = (Q^p - Q(x^p, y^p)) / p, reduced
  uint64_t out_scale;                // inv(q00^e)
  mutable std::map<std::pair<uint64_t, uint32_t>, uint64_t> binom_cache;

  uint64_t inv_unit(uint64_t u) const { return powmod(u % mod, phi - 1, mod); }

  // p^i * C(q_top, i) mod p^alpha, with the p-valuation tracked exactly.
  uint64_t scaled_binom(uint64_t q_top, uint32_t i) const {
    if (q_top < i) return 0;
    auto key = std::make_pair(q_top, i);
    auto it = binom_cache.find(key);
    if (it != binom_cache.end()) return it->second;
    uint32_t val = i;
    uint64_t unit = 1 % mod;
    for (uint32_t t = 1; t <= i; ++t) {
      uint64_t num = q_top - i + t;
      while (num % p == 0) {
        num /= p;
        ++val;
      }
      unit = mulmod(unit, num % mod, mod);
      uint64_t den = t;
      uint32_t dv = 0;
      while (den % p == 0) {
        den /= p;
        ++dv;
      }
      val -= dv;
      unit = mulmod(unit, inv_unit(den), mod);
    }
    uint64_t result =
        val >= alpha ? 0 : mulmod(unit, pow_checked(p, val) % mod, mod);
    binom_cache.emplace(key, result);
    return result;
  }
};

RowPoly rows_from_bivar(const BivarPoly& a) {
  RowPoly r;
  for (const auto& t : a.terms) {
    if (r.size() <= static_cast<size_t>(t.j)) r.resize(t.j + 1);
    Univar& row = r[t.j];
    if (row.size() <= static_cast<size_t>(t.i)) row.resize(t.i + 1, 0);
    row[t.i] = static_cast<uint64_t>(t.c);
  }
  return r;
}

// w(x) * b, row by row.
RowPoly mul_univar_rows(const Univar& w, const RowPoly& b, uint64_t mod) {
  RowPoly out(b.size());
  if (w.empty()) return out;
  for (size_t j = 0; j < b.size(); ++j) {
    const Univar& row = b[j];
    if (row.empty()) continue;
    Univar& o = out[j];
    o.assign(w.size() + row.size() - 1, 0);
    for (size_t a = 0; a < w.size(); ++a) {
      if (w[a] == 0) continue;
      for (size_t bx = 0; bx < row.size(); ++bx)
        o[a + bx] = (o[a + bx] + mulmod(w[a], row[bx], mod)) % mod;
    }
  }
  return out;
}

RowPoly mul_rows(const RowPoly& a, const RowPoly& b, uint64_t mod) {
  if (a.empty() || b.empty()) return {};
  RowPoly out(a.size() + b.size() - 1);
  for (size_t ja = 0; ja < a.size(); ++ja) {
    if (a[ja].empty()) continue;
    for (size_t jb = 0; jb < b.size(); ++jb) {
      if (b[jb].empty()) continue;
      Univar& o = out[ja + jb];
      size_t need = a[ja].size() + b[jb].size() - 1;
      if (o.size() < need) o.resize(need, 0);
      for (size_t ia = 0; ia < a[ja].size(); ++ia) {
        uint64_t ca = a[ja][ia];
        if (ca == 0) continue;
        for (size_t ib = 0; ib < b[jb].size(); ++ib)
          o[ia + ib] = (o[ia + ib] + mulmod(ca, b[jb][ib], mod)) % mod;
      }
    }
  }
  return out;
}

// Lambda_{r,r}: keep coefficients with both exponents congruent to r, and
// divide the exponents by p.
RowPoly cartier_rows(const RowPoly& a, uint32_t r, uint32_t p) {
  RowPoly out;
  for (size_t j = r; j < a.size(); j += p) {
    size_t oj = (j - r) / p;
    if (out.size() <= oj) out.resize(oj + 1);
    const Univar& row = a[j];
    for (size_t i = r; i < row.size(); i += p) {
      if (row[i] == 0) continue;
      size_t oi = (i - r) / p;
      Univar& orow = out[oj];
      if (orow.size() <= oi) orow.resize(oi + 1, 0);
      orow[oi] = row[i];
    }
  }
  return out;
}

void add_into_rows(RowPoly& acc, const RowPoly& piece, uint64_t coef, uint64_t mod) {
  if (acc.size() < piece.size()) acc.resize(piece.size());
  for (size_t j = 0; j < piece.size(); ++j) {
    if (piece[j].empty()) continue;
    Univar& o = acc[j];
    if (o.size() < piece[j].size()) o.resize(piece[j].size(), 0);
    for (size_t i = 0; i < piece[j].size(); ++i)
      o[i] = (o[i] + mulmod(piece[j][i], coef, mod)) % mod;
  }
}

// Division by Q = u*y + c(x): Horner in y. The remainder is univariate.
void divmod_by_q(RowPoly&& a, const QadicCtx& ctx, RowPoly& quot, Univar& rem) {
  rows_trim(a);
  quot.clear();
  if (a.empty()) {
    rem.clear();
    return;
  }
  size_t dy = a.size() - 1;
  quot.assign(dy, Univar{});
  Univar carry = std::move(a[dy]);
  for (size_t k = dy; k >= 1; --k) {
    // quotient coefficient of y^{k-1} is carry / u
    Univar qrow(carry.size(), 0);
    for (size_t i = 0; i < carry.size(); ++i)
      qrow[i] = mulmod(carry[i], ctx.y_coeff_inv, ctx.mod);
    // carry <- ay[k-1] - (carry/u) * c
    Univar next = std::move(a[k - 1]);
    size_t want = carry.empty() || ctx.c.empty() ? 0 : qrow.size() + ctx.c.size() - 1;
    if (next.size() < want) next.resize(want, 0);
    for (size_t i = 0; i < qrow.size(); ++i) {
      if (qrow[i] == 0) continue;
      for (size_t b = 0; b < ctx.c.size(); ++b) {
        uint64_t sub = mulmod(qrow[i], ctx.c[b], ctx.mod);
        next[i + b] = (next[i + b] + ctx.mod - sub) % ctx.mod;
      }
    }
    univar_trim(qrow);
    quot[k - 1] = std::move(qrow);
    carry = std::move(next);
  }
  univar_trim(carry);
  rem = std::move(carry);
  rows_trim(quot);
}

QState canonicalize(std::map<int64_t, RowPoly>&& acc, const QadicCtx& ctx) {
  QState out;
  while (!acc.empty()) {
    auto it = acc.begin();
    int64_t t = it->first;
    RowPoly a = std::move(it->second);
    acc.erase(it);
    RowPoly quot;
    Univar rem;
    divmod_by_q(std::move(a), ctx, quot, rem);
    if (!rem.empty()) out.emplace_back(t, std::move(rem));
    if (!rows_zero(quot)) {
      auto [jt, fresh] = acc.emplace(t + 1, RowPoly{});
      if (fresh)
        jt->second = std::move(quot);
      else
        add_into_rows(jt->second, quot, 1 % ctx.mod, ctx.mod);
    }
  }
  return out;
}

QState qadic_transition(const QState& s, uint32_t r, const QadicCtx& ctx) {
  std::map<int64_t, RowPoly> acc;
  uint64_t mult_exp = ctx.e * (ctx.p - 1);
  for (const auto& [t, w] : s) {
    uint64_t n_exp = static_cast<uint64_t>(t) + mult_exp;
    uint64_t q_top = n_exp / ctx.p;
    uint32_t par = static_cast<uint32_t>(n_exp % ctx.p);
    RowPoly base = mul_univar_rows(w, ctx.q_small_pow[par], ctx.mod);
    for (uint32_t i = 0; i < ctx.alpha; ++i) {
      if (i > 0) {
        if (q_top < i) break;
        base = mul_rows(base, ctx.frob_defect, ctx.mod);
      }
      uint64_t coef = ctx.scaled_binom(q_top, i);
      if (coef == 0) continue;
      RowPoly piece = cartier_rows(base, r, ctx.p);
      if (piece.empty()) continue;
      int64_t slot = static_cast<int64_t>(q_top - i);
      auto [jt, fresh] = acc.emplace(slot, RowPoly{});
      if (fresh) jt->second = RowPoly{};
      add_into_rows(jt->second, piece, coef, ctx.mod);
    }
  }
  return canonicalize(std::move(acc), ctx);
}

uint64_t qadic_output(const QState& s, const QadicCtx& ctx) {
  uint64_t v = 0;
  for (const auto& [t, w] : s) {
    if (w.empty()) continue;
    uint64_t digit0 = w[0];
    v = (v + mulmod(digit0, powmod(ctx.q00, static_cast<uint64_t>(t), ctx.mod), ctx.mod)) %
        ctx.mod;
  }
  return mulmod(v, ctx.out_scale, ctx.mod);
}

}  // namespace

Dfao diagonal_automaton_qadic(const RationalBivar& f, uint32_t p, uint32_t alpha) {
  if (!is_prime(p)) throw invalid_parameter("p must be prime");
  if (alpha == 0) return trivial_ring_automaton(p, Reading::LSD);
  uint64_t mod = pow_checked(p, alpha);
  BivarPoly P = reduce(f.num, mod);
  BivarPoly Q = reduce(f.den, mod);
  if (!qadic_eligible(Q)) throw not_supported("qadic representation needs Q = u*y + c(x)");
  uint64_t q0 = static_cast<uint64_t>(Q.at_origin());
  if (q0 % p == 0)
    throw invalid_parameter("diagonal_automaton: denominator is not a unit at the origin");

  QadicCtx ctx;
  ctx.p = p;
  ctx.alpha = alpha;
  ctx.mod = mod;
  ctx.e = pow_checked(p, alpha - 1);
  ctx.phi = (mod / p) * (p - 1);
  ctx.q00 = q0;
  uint64_t u = 0;
  for (const auto& t : Q.terms)
    if (t.j == 1) u = static_cast<uint64_t>(t.c);
  ctx.y_coeff_inv = Residue(u, p, alpha).inv_unit().value();
  for (const auto& t : Q.terms)
    if (t.j == 0) {
      if (ctx.c.size() <= static_cast<size_t>(t.i)) ctx.c.resize(t.i + 1, 0);
      ctx.c[t.i] = static_cast<uint64_t>(t.c);
    }
  BivarPoly qpow = BivarPoly::constant(1 % static_cast<int64_t>(mod));
  ctx.q_small_pow.push_back(rows_from_bivar(qpow));
  for (uint32_t k = 1; k < p; ++k) {
    qpow = mul(qpow, Q, mod);
    ctx.q_small_pow.push_back(rows_from_bivar(qpow));
  }
  {
    // R = (Q^p - Q(x^p, y^p)) / p, computed exactly then reduced.
    BivarPoly q_exact = reduce(f.den, 0);
    BivarPoly qp = pow(q_exact, p, 0);
    BivarPoly frob;
    for (const auto& t : q_exact.terms)
      frob.terms.push_back({t.i * p, t.j * p, t.c});
    std::sort(frob.terms.begin(), frob.terms.end(), [](const auto& a, const auto& b) {
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    BivarPoly diff = sub(qp, frob, 0);
    BivarPoly r_poly;
    for (const auto& t : diff.terms) {
      if (t.c % static_cast<int64_t>(p) != 0)
        throw internal_error("Frobenius defect not divisible by p");
      r_poly.terms.push_back({t.i, t.j, t.c / static_cast<int64_t>(p)});
    }
    ctx.frob_defect = rows_from_bivar(reduce(r_poly, mod));
  }
  ctx.out_scale = Residue(powmod(q0, ctx.e, mod), p, alpha).inv_unit().value();

  // Initial state: P * Q^{e-1}, i.e. the Q-adic digits of P shifted up.
  std::map<int64_t, RowPoly> acc0;
  acc0.emplace(static_cast<int64_t>(ctx.e - 1), rows_from_bivar(P));
  QState s0 = canonicalize(std::move(acc0), ctx);

  std::map<QState, int> index;
  std::vector<QState> states;
  std::deque<int> queue;
  index.emplace(s0, 0);
  states.push_back(std::move(s0));
  queue.push_back(0);
  std::vector<std::vector<int>> delta;
  std::vector<uint64_t> outputs;
  constexpr size_t kStateCap = size_t{1} << 18;
  int64_t d = std::max(Q.deg_x(), Q.deg_y());
  int64_t degree_bound = 2 * d * static_cast<int64_t>(ctx.e) +
                         std::max(P.deg_x(), P.deg_y()) + d;
  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    if (static_cast<size_t>(si) >= delta.size()) {
      delta.resize(si + 1);
      outputs.resize(si + 1);
    }
    outputs[si] = qadic_output(states[si], ctx);
    delta[si].resize(p);
    for (uint32_t r = 0; r < p; ++r) {
      QState next = qadic_transition(states[si], r, ctx);
      // Degree of the denoted polynomial, bounded digitwise.
      for (const auto& [t, w] : next)
        check_degree_bound(static_cast<int64_t>(w.size()) + t * d, t + 1, degree_bound, alpha);
      auto [it, fresh] = index.emplace(std::move(next), static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(it->first);
        queue.push_back(it->second);
        if (states.size() > kStateCap)
          throw budget_exceeded("diagonal_automaton: state explosion");
      }
      delta[si][r] = it->second;
    }
  }

  Dfao m;
  m.p = p;
  m.reading = Reading::LSD;
  m.initial = 0;
  m.delta = std::move(delta);
  m.outputs = std::move(outputs);
  m.residue_output = true;
  m.out_alpha = alpha;
  finish_lsd(m, f, p, alpha);
  return m;
}

}  // namespace detail

Dfao diagonal_automaton(const RationalBivar& f, uint32_t p, uint32_t alpha) {
  if (!is_prime(p)) throw invalid_parameter("p must be prime");
  if (alpha == 0) return trivial_ring_automaton(p, Reading::LSD);
  uint64_t mod = pow_checked(p, alpha);
  if (detail::qadic_eligible(reduce(f.den, mod)))
    return detail::diagonal_automaton_qadic(f, p, alpha);
  return detail::diagonal_automaton_plain(f, p, alpha);
}

FurstenbergResult furstenberg(const BivarPoly& annihilator, uint32_t p) {
  if (!is_prime(p)) throw invalid_parameter("p must be prime");
  if (annihilator.is_zero()) throw invalid_parameter("zero annihilator");

  // Substitute y -> g/x and clear x powers: c x^i y^j -> c x^{i-j+s} g^j.
  int64_t min_exp = 0;
  for (const auto& t : annihilator.terms) min_exp = std::min(min_exp, t.i - t.j);
  int64_t shift_exp = -min_exp;
  BivarPoly p_tilde;  // variables (x, g)
  for (const auto& t : annihilator.terms)
    p_tilde = add(p_tilde, BivarPoly::monomial(t.i - t.j + shift_exp, t.j, t.c));

  if (p_tilde.at_origin() != 0)
    throw not_supported("furstenberg: P~(0,0) != 0; the embedding hypotheses fail");
  BivarPoly dg = derivative_y(p_tilde);
  int64_t d0 = dg.at_origin();
  if (d0 % static_cast<int64_t>(p) == 0)
    throw not_supported("furstenberg: dP~/dg is not a unit at the origin mod " +
                        std::to_string(p));

  // G = y * (dP~/dg)(xy, y) / (P~(xy, y) / y).
  BivarPoly num;
  for (const auto& t : dg.terms) num = add(num, BivarPoly::monomial(t.i, t.i + t.j + 1, t.c));
  BivarPoly den;
  for (const auto& t : p_tilde.terms) {
    if (t.i + t.j < 1) throw internal_error("furstenberg: P~(xy, y) not divisible by y");
    den = add(den, BivarPoly::monomial(t.i, t.i + t.j - 1, t.c));
  }
  return {RationalBivar{num, den}, 1};
}

Dfao shift_compose(const Dfao& m, uint64_t c) {
  if (m.reading != Reading::LSD) throw invalid_parameter("shift_compose expects an LSD automaton");
  if (!m.zero_invariant && !is_zero_invariant(m))
    throw normalization_error("shift_compose requires a zero-invariant automaton");
  if (c > pow_checked(m.p, 8)) throw invalid_parameter("shift_compose: shift too large");

  // Output of (q, carry): finish feeding the carry digits into m.
  auto settle = [&](int q, uint64_t carry) {
    while (carry > 0) {
      q = m.delta[q][carry % m.p];
      carry /= m.p;
    }
    return m.outputs[q];
  };

  std::map<std::pair<int, uint64_t>, int> index;
  std::vector<std::pair<int, uint64_t>> states;
  std::deque<int> queue;
  index.emplace(std::make_pair(m.initial, c), 0);
  states.emplace_back(m.initial, c);
  queue.push_back(0);
  std::vector<std::vector<int>> delta;
  std::vector<uint64_t> outputs;
  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    if (static_cast<size_t>(si) >= delta.size()) {
      delta.resize(si + 1);
      outputs.resize(si + 1);
    }
    auto [q, carry] = states[si];
    outputs[si] = settle(q, carry);
    delta[si].resize(m.p);
    for (uint32_t r = 0; r < m.p; ++r) {
      uint64_t total = carry + r;
      std::pair<int, uint64_t> next{m.delta[q][total % m.p], total / m.p};
      auto [it, fresh] = index.emplace(next, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(next);
        queue.push_back(it->second);
      }
      delta[si][r] = it->second;
    }
  }
  Dfao r;
  r.p = m.p;
  r.reading = Reading::LSD;
  r.initial = 0;
  r.delta = std::move(delta);
  r.outputs = std::move(outputs);
  r.residue_output = m.residue_output;
  r.out_alpha = m.out_alpha;
  if (!is_zero_invariant(r))
    throw internal_error("shift_compose: result not trailing-zero invariant");
  r.zero_invariant = true;
  return r;
}

Dfao algebraic_automaton(const BivarPoly& annihilator, uint32_t p, uint32_t alpha) {
  if (alpha == 0) return trivial_ring_automaton(p, Reading::MSD);
  FurstenbergResult fb = furstenberg(annihilator, p);
  Dfao lsd = diagonal_automaton(fb.g, p, alpha);
  Dfao shifted = shift_compose(lsd, fb.shift);
  return reverse_reading(shifted);
}

}  // namespace padic
