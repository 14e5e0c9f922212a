#include "padic/cocycle.hpp"

#include <algorithm>

namespace padic {

void OrderedDiagram::validate() const {
  if (!is_prime(p)) throw invalid_parameter("diagram rank must be prime");
  if (theta.size() != p) throw invalid_parameter("theta must have one image per vertex");
  for (const auto& w : theta) {
    if (w.size() != p) throw invalid_parameter("theta image length differs from p");
    std::vector<char> seen(p, 0);
    for (int l : w) {
      if (l < 0 || l >= static_cast<int>(p)) throw invalid_parameter("theta letter out of range");
      if (seen[l]) throw invalid_parameter("theta image is not a permutation word");
      seen[l] = 1;
    }
  }
  if (theta[0][0] != 0) throw invalid_parameter("theta(0) must start with 0");
}

int OrderedDiagram::edge_rank(int source, int target) const {
  const auto& w = theta[target];
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k] == source) return static_cast<int>(k);
  throw internal_error("edge_rank: source missing from a permutation word");
}

OrderedDiagram OrderedDiagram::parse(uint32_t p, const std::string& words) {
  if (p > 10) throw invalid_parameter("digit-string theta only supports p <= 10");
  OrderedDiagram d;
  d.p = p;
  std::vector<int> cur;
  for (size_t pos = 0; pos <= words.size(); ++pos) {
    if (pos == words.size() || words[pos] == ';') {
      d.theta.push_back(cur);
      cur.clear();
    } else if (words[pos] >= '0' && words[pos] <= '9') {
      cur.push_back(words[pos] - '0');
    } else {
      throw parse_error("theta words must be digits joined by ';'", 1, pos + 1);
    }
  }
  d.validate();
  return d;
}

OrderedDiagram odometer_diagram(uint32_t p) {
  OrderedDiagram d;
  d.p = p;
  std::vector<int> w;
  for (uint32_t r = 0; r < p; ++r) w.push_back(static_cast<int>(r));
  d.theta.assign(p, w);
  d.validate();
  return d;
}

AdicPath vershik_successor(const OrderedDiagram& d, const AdicPath& x, size_t depth_cap) {
  d.validate();
  int pmax = static_cast<int>(d.p) - 1;
  size_t n = 0;
  while (true) {
    if (n >= depth_cap)
      throw needs_deeper_path("vershik_successor: no non-maximal edge within the depth cap");
    if (d.edge_rank(x.vertex(n), x.vertex(n + 1)) < pmax) break;
    ++n;
  }
  AdicPath out = x;
  if (out.v.size() < n + 2) out.v.resize(n + 2, 0);
  int rank = d.edge_rank(out.v[n], out.v[n + 1]);
  out.v[n] = d.theta[out.v[n + 1]][rank + 1];
  // Minimal path into the new v_n.
  for (size_t j = n; j-- > 0;) out.v[j] = d.theta[out.v[j + 1]][0];
  return out;
}

std::vector<uint64_t> cocycle_sequence(const OrderedDiagram& d, uint64_t n) {
  d.validate();
  std::vector<uint64_t> s;
  s.reserve(n);
  AdicPath x;  // all-zero path
  for (uint64_t i = 0; i < n; ++i) {
    uint64_t val = 0;
    uint64_t scale = 1;
    for (size_t j = 0; j < x.v.size(); ++j) {
      val += static_cast<uint64_t>(x.v[j]) * scale;
      scale *= d.p;
    }
    s.push_back(val);
    if (i + 1 < n) x = vershik_successor(d, x);
  }
  return s;
}

Substitution cocycle_substitution(const OrderedDiagram& d, uint32_t alpha) {
  d.validate();
  if (alpha == 0) throw invalid_parameter("cocycle_substitution needs alpha >= 1");
  uint64_t mod = pow_checked(d.p, alpha);
  if (mod > (uint64_t{1} << 24))
    throw budget_exceeded("cocycle_substitution: alphabet would exceed 2^24 letters");
  uint64_t low = mod / d.p;  // p^{alpha-1}
  Substitution s;
  s.p = d.p;
  s.seed = 0;
  s.has_coding = true;
  s.coding_residue = true;
  s.coding_alpha = alpha;
  for (uint64_t j = 0; j < mod; ++j) {
    s.alphabet.push_back(std::to_string(j));
    std::vector<int> img;
    for (uint32_t r = 0; r < d.p; ++r)
      img.push_back(static_cast<int>(d.theta[j % d.p][r] + d.p * (j % low)));
    s.images.push_back(std::move(img));
    s.coding.push_back(j);
  }
  s.validate();
  return s;
}

CocycleReport verify_cocycle(const OrderedDiagram& d, uint32_t alpha, uint64_t n) {
  uint64_t mod = pow_checked(d.p, alpha);
  std::vector<uint64_t> fp = fixed_point(cocycle_substitution(d, alpha), n);
  std::vector<uint64_t> s = cocycle_sequence(d, n);
  for (uint64_t i = 0; i < n; ++i)
    if (fp[i] != s[i] % mod)
      return {false, i,
              "fixed point gives " + std::to_string(fp[i]) + ", Vershik path gives " +
                  std::to_string(s[i] % mod)};
  return {true, 0, ""};
}

CocycleReport regular_recurrence_check(const std::vector<uint64_t>& s, uint64_t n_max) {
  if (n_max > 0 && s.size() < 4 * n_max)
    throw invalid_parameter("regular_recurrence_check: sequence too short");
  auto v = [&](uint64_t i) { return static_cast<int64_t>(s[i]); };
  for (uint64_t n = 0; n < n_max; ++n) {
    int64_t a = v(n), b = v(2 * n), c = v(2 * n + 1);
    struct {
      uint64_t idx;
      int64_t want;
    } rows[4] = {
        {4 * n, -2 * a + 3 * b},
        {4 * n + 1, -2 * a + 2 * b + c},
        {4 * n + 2, -2 * a + 3 * c},
        {4 * n + 3, -2 * a + b + 2 * c},
    };
    for (const auto& row : rows)
      if (v(row.idx) != row.want)
        return {false, row.idx,
                "s(" + std::to_string(row.idx) + ") = " + std::to_string(v(row.idx)) +
                    ", recurrence gives " + std::to_string(row.want)};
  }
  return {true, 0, ""};
}

}  // namespace padic
