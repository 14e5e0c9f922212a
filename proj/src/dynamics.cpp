#include "padic/dynamics.hpp"

#include <algorithm>

#include "json.hpp"

namespace padic {

namespace {

int run_digits(const Dfao& m, int from, const std::vector<uint8_t>& digits) {
  int q = from;
  for (uint8_t d : digits) q = m.delta[q][d];
  return q;
}

// MSD digits of k p^n + r as (k + r/p^n) followed by n digits of r mod p^n,
// so n never has to fit in a machine word.
std::vector<uint8_t> index_digits(uint32_t p, uint64_t k, uint64_t n, uint64_t r) {
  uint64_t high = r;
  uint64_t low = r;
  for (uint64_t i = 0; i < n && high > 0; ++i) high /= p;
  if (high > 0) {
    uint64_t pn = 1;
    for (uint64_t i = 0; i < n; ++i) pn *= p;  // fits: p^n <= r here
    low = r % pn;
    k += high;
  }
  std::vector<uint8_t> out = digits_msd(k, p).digits;
  std::vector<uint8_t> tail(n, 0);
  for (uint64_t i = n; i-- > 0 && low > 0;) {
    tail[i] = static_cast<uint8_t>(low % p);
    low /= p;
  }
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

// Entry point and cycle of the 0-orbit from a state.
std::pair<std::vector<int>, size_t> zero_orbit(const Dfao& m, int start) {
  std::vector<int> order;
  std::vector<int> pos(m.num_states(), -1);
  int q = start;
  while (pos[q] == -1) {
    pos[q] = static_cast<int>(order.size());
    order.push_back(q);
    q = m.delta[q][0];
  }
  size_t entry = static_cast<size_t>(pos[q]);
  return {std::move(order), entry};
}

// Outputs along the 0-cycle after reading (r)_p from each cycle state, and
// the minimal period of that cyclic word.
std::pair<std::vector<uint64_t>, uint64_t> cycle_values(const Dfao& m, uint64_t k, uint64_t r) {
  std::vector<uint8_t> kd = digits_msd(k, m.p).digits;
  int qk = run_digits(m, m.initial, kd);
  auto [order, entry] = zero_orbit(m, qk);
  std::vector<uint8_t> rd = digits_msd(r, m.p).digits;
  std::vector<uint64_t> w;
  for (size_t i = entry; i < order.size(); ++i)
    w.push_back(m.outputs[run_digits(m, order[i], rd)]);
  size_t len = w.size();
  uint64_t period = len;
  for (uint64_t cand = 1; cand < len; ++cand) {
    if (len % cand != 0) continue;
    bool ok = true;
    for (size_t i = 0; ok && i < len; ++i) ok = w[i] == w[(i + cand) % len];
    if (ok) {
      period = cand;
      break;
    }
  }
  return {std::move(w), period};
}

}  // namespace

LimitResult padic_limit(const Tower& t, uint64_t k, uint64_t r) {
  if (k == 0) throw invalid_parameter("padic_limit needs k >= 1");
  if (t.top == 0) throw invalid_parameter("padic_limit needs a built tower");
  auto [w, period] = cycle_values(t.level(t.top).machine, k, r);
  LimitResult res;
  if (period == 1) {
    // Cross-level coherence: every level must give the same single value
    // reduced mod p^alpha.
    for (uint32_t a = 1; a < t.top; ++a) {
      auto [wa, pa] = cycle_values(t.level(a).machine, k, r);
      uint64_t mod = pow_checked(t.p, a);
      if (pa != 1 || wa[0] != w[0] % mod)
        throw internal_error("padic_limit: level " + std::to_string(a) +
                             " is incoherent with the top-level limit");
    }
    res.is_limit = true;
    res.value = truncated_from_value(w[0], t.p, t.top);
    return res;
  }
  res.is_limit = false;
  res.period = period;
  for (uint64_t i = 0; i < period; ++i)
    res.values.push_back(truncated_from_value(w[i], t.p, t.top));
  return res;
}

DigitGrid digit_grid(const Tower& t, uint64_t k, uint64_t r, uint64_t rows, uint32_t width) {
  if (width == 0 || width > t.top)
    throw precision_error("digit_grid: width exceeds the built precision");
  if (k == 0) throw invalid_parameter("digit_grid needs k >= 1");
  const Dfao& m = t.level(width).machine;
  DigitGrid g;
  g.p = t.p;
  g.width = width;
  for (uint64_t n = 0; n < rows; ++n) {
    uint64_t v = m.outputs[run_digits(m, m.initial, index_digits(t.p, k, n, r))];
    std::vector<uint32_t> row(width, 0);
    for (uint32_t c = width; c-- > 0 && v > 0;) {
      row[c] = static_cast<uint32_t>(v % t.p);
      v /= t.p;
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

std::string DigitGrid::to_pbm() const {
  std::string out = "P1\n" + std::to_string(width) + " " + std::to_string(rows.size()) + "\n";
  for (const auto& row : rows) {
    for (uint32_t c = 0; c < width; ++c) {
      out += row[c] != 0 ? '1' : '0';
      out += c + 1 < width ? ' ' : '\n';
    }
  }
  return out;
}

std::string DigitGrid::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["width"] = width;
  j["rows"] = rows;
  return j.dump(2);
}

}  // namespace padic
