#include "padic/dfao.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace padic {

void Dfao::validate() const {
  if (!is_prime(p)) throw invalid_parameter("automaton alphabet size must be prime");
  int n = num_states();
  if (n == 0) throw invalid_parameter("automaton has no states");
  if (initial < 0 || initial >= n) throw invalid_parameter("initial state out of range");
  if (static_cast<int>(outputs.size()) != n)
    throw invalid_parameter("output table size mismatch");
  for (const auto& row : delta) {
    if (row.size() != p) throw invalid_parameter("transition table not total");
    for (int t : row)
      if (t < 0 || t >= n) throw invalid_parameter("transition target out of range");
  }
  if (residue_output) {
    uint64_t mod = pow_checked(p, out_alpha);
    for (uint64_t v : outputs)
      if (v >= mod) throw invalid_parameter("output residue out of range");
  }
}

uint64_t eval(const Dfao& m, uint64_t n) {
  DigitString w = digits_msd(n, m.p);
  int s = m.initial;
  if (m.reading == Reading::MSD) {
    for (uint8_t d : w.digits) s = m.delta[s][d];
  } else {
    for (auto it = w.digits.rbegin(); it != w.digits.rend(); ++it) s = m.delta[s][*it];
  }
  return m.outputs[s];
}

std::vector<uint64_t> eval_prefix(const Dfao& m, uint64_t n) {
  std::vector<uint64_t> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) out.push_back(eval(m, i));
  return out;
}

std::pair<Dfao, std::vector<int>> prune(const Dfao& m) {
  int n = m.num_states();
  std::vector<int> old2new(n, -1);
  std::vector<int> order;
  std::deque<int> queue{m.initial};
  old2new[m.initial] = 0;
  order.push_back(m.initial);
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (uint32_t d = 0; d < m.p; ++d) {
      int t = m.delta[s][d];
      if (old2new[t] < 0) {
        old2new[t] = static_cast<int>(order.size());
        order.push_back(t);
        queue.push_back(t);
      }
    }
  }
  Dfao r;
  r.p = m.p;
  r.reading = m.reading;
  r.residue_output = m.residue_output;
  r.out_alpha = m.out_alpha;
  r.zero_invariant = m.zero_invariant;
  r.initial = 0;
  r.delta.resize(order.size());
  r.outputs.resize(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int s = order[i];
    r.outputs[i] = m.outputs[s];
    r.delta[i].resize(m.p);
    for (uint32_t d = 0; d < m.p; ++d) r.delta[i][d] = old2new[m.delta[s][d]];
  }
  return {std::move(r), std::move(old2new)};
}

std::pair<Dfao, std::vector<int>> minimize(const Dfao& m) {
  auto [pm, old2p] = prune(m);
  int n = pm.num_states();

  // Seed the partition with the output letters.
  std::vector<int> cls(n);
  {
    std::map<uint64_t, int> by_out;
    for (int s = 0; s < n; ++s) {
      auto [it, fresh] = by_out.emplace(pm.outputs[s], static_cast<int>(by_out.size()));
      cls[s] = it->second;
    }
  }
  size_t count = 0;
  for (int c : cls) count = std::max<size_t>(count, c + 1);
  for (;;) {
    std::map<std::vector<int>, int> sigs;
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
      std::vector<int> sig;
      sig.reserve(pm.p + 1);
      sig.push_back(cls[s]);
      for (uint32_t d = 0; d < pm.p; ++d) sig.push_back(cls[pm.delta[s][d]]);
      auto [it, fresh] = sigs.emplace(std::move(sig), static_cast<int>(sigs.size()));
      next[s] = it->second;
    }
    if (sigs.size() == count) break;
    count = sigs.size();
    cls = std::move(next);
  }

  Dfao q;
  q.p = pm.p;
  q.reading = pm.reading;
  q.residue_output = pm.residue_output;
  q.out_alpha = pm.out_alpha;
  q.zero_invariant = pm.zero_invariant;
  q.initial = cls[pm.initial];
  q.delta.assign(count, {});
  q.outputs.assign(count, 0);
  for (int s = 0; s < n; ++s) {
    q.outputs[cls[s]] = pm.outputs[s];
    q.delta[cls[s]].resize(pm.p);
    for (uint32_t d = 0; d < pm.p; ++d) q.delta[cls[s]][d] = cls[pm.delta[s][d]];
  }
  auto [canon, cls2final] = prune(q);

  std::vector<int> merge_map(m.num_states(), -1);
  for (int s = 0; s < m.num_states(); ++s)
    if (old2p[s] >= 0) merge_map[s] = cls2final[cls[old2p[s]]];
  return {std::move(canon), std::move(merge_map)};
}

namespace {

void check_comparable(const Dfao& m1, const Dfao& m2) {
  if (m1.p != m2.p) throw invalid_parameter("equal_behavior: digit alphabets differ");
  if (m1.reading != m2.reading) throw invalid_parameter("equal_behavior: reading orders differ");
  if (m1.residue_output != m2.residue_output)
    throw invalid_parameter("equal_behavior: output kinds differ");
  if (m1.residue_output && m1.out_alpha != m2.out_alpha)
    throw invalid_parameter("equal_behavior: output moduli differ");
}

// Product reachability; outputs are compared exactly at every state pair
// reached by a canonical digit string.
bool product_equal(const Dfao& m1, const Dfao& m2) {
  uint32_t p = m1.p;
  if (m1.outputs[m1.initial] != m2.outputs[m2.initial]) return false;
  auto key = [&](int a, int b) { return static_cast<int64_t>(a) * m2.num_states() + b; };
  std::set<int64_t> seen;
  std::deque<std::pair<int, int>> queue;
  if (m1.reading == Reading::MSD) {
    // Canonical MSD strings have a nonzero first digit; explore from there.
    for (uint32_t d = 1; d < p; ++d) {
      int a = m1.delta[m1.initial][d], b = m2.delta[m2.initial][d];
      if (m1.outputs[a] != m2.outputs[b]) return false;
      if (seen.insert(key(a, b)).second) queue.emplace_back(a, b);
    }
    while (!queue.empty()) {
      auto [a, b] = queue.front();
      queue.pop_front();
      for (uint32_t d = 0; d < p; ++d) {
        int a2 = m1.delta[a][d], b2 = m2.delta[b][d];
        if (m1.outputs[a2] != m2.outputs[b2]) return false;
        if (seen.insert(key(a2, b2)).second) queue.emplace_back(a2, b2);
      }
    }
  } else {
    // Canonical LSD strings end with a nonzero digit: compare outputs on
    // every pair entered through a nonzero edge.
    seen.insert(key(m1.initial, m2.initial));
    queue.emplace_back(m1.initial, m2.initial);
    while (!queue.empty()) {
      auto [a, b] = queue.front();
      queue.pop_front();
      for (uint32_t d = 0; d < p; ++d) {
        int a2 = m1.delta[a][d], b2 = m2.delta[b][d];
        if (d > 0 && m1.outputs[a2] != m2.outputs[b2]) return false;
        if (seen.insert(key(a2, b2)).second) queue.emplace_back(a2, b2);
      }
    }
  }
  return true;
}

}  // namespace

bool equal_behavior(const Dfao& m1, const Dfao& m2) {
  check_comparable(m1, m2);
  return product_equal(m1, m2);
}

bool is_zero_invariant(const Dfao& m) {
  if (m.reading == Reading::MSD) {
    // delta(s0, 0) must be behaviourally equivalent to s0 over all words.
    Dfao shifted = m;
    shifted.initial = m.delta[m.initial][0];
    auto key = [&](int a, int b) { return static_cast<int64_t>(a) * m.num_states() + b; };
    std::set<int64_t> seen;
    std::deque<std::pair<int, int>> queue;
    queue.emplace_back(shifted.initial, m.initial);
    seen.insert(key(shifted.initial, m.initial));
    while (!queue.empty()) {
      auto [a, b] = queue.front();
      queue.pop_front();
      if (m.outputs[a] != m.outputs[b]) return false;
      for (uint32_t d = 0; d < m.p; ++d) {
        int a2 = m.delta[a][d], b2 = m.delta[b][d];
        if (seen.insert(key(a2, b2)).second) queue.emplace_back(a2, b2);
      }
    }
    return true;
  }
  // LSD: appending a zero must never change the output.
  auto [pm, unused] = prune(m);
  for (int s = 0; s < pm.num_states(); ++s)
    if (pm.outputs[pm.delta[s][0]] != pm.outputs[s]) return false;
  return true;
}

Dfao pad_close(const Dfao& m) {
  if (m.reading != Reading::MSD) throw invalid_parameter("pad_close applies to MSD automata");
  if (is_zero_invariant(m)) {
    Dfao r = m;
    r.zero_invariant = true;
    return r;
  }
  Dfao r = m;
  int fresh = r.num_states();
  std::vector<int> row(r.p);
  row[0] = fresh;
  for (uint32_t d = 1; d < r.p; ++d) row[d] = m.delta[m.initial][d];
  r.delta.push_back(std::move(row));
  r.outputs.push_back(m.outputs[m.initial]);
  r.initial = fresh;
  r.zero_invariant = true;
  return prune(r).first;
}

namespace {

// Core of reverse_reading over a compact output type. MSD states are maps
// s -> output of the LSD run from s on the digits consumed so far. The
// maps are deduplicated by hash with exact comparison on collision, and
// stored once.
template <typename T>
Dfao reverse_core(const Dfao& lm) {
  int n = lm.num_states();
  constexpr size_t kStateCap = size_t{1} << 20;

  std::vector<std::vector<T>> states;
  std::unordered_map<uint64_t, std::vector<int>> index;
  auto hash_of = [](const std::vector<T>& h) {
    uint64_t x = 1469598103934665603ull;
    for (T v : h) {
      x ^= static_cast<uint64_t>(v);
      x *= 1099511628211ull;
    }
    return x;
  };
  auto intern = [&](std::vector<T>&& h) {
    auto& bucket = index[hash_of(h)];
    for (int id : bucket)
      if (states[id] == h) return std::make_pair(id, false);
    int id = static_cast<int>(states.size());
    bucket.push_back(id);
    states.push_back(std::move(h));
    return std::make_pair(id, true);
  };

  std::vector<T> h0(n);
  for (int s = 0; s < n; ++s) h0[s] = static_cast<T>(lm.outputs[s]);
  intern(std::move(h0));
  std::deque<int> queue;
  queue.push_back(0);
  std::vector<std::vector<int>> delta;
  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    if (static_cast<size_t>(si) >= delta.size()) delta.resize(si + 1);
    delta[si].resize(lm.p);
    for (uint32_t d = 0; d < lm.p; ++d) {
      std::vector<T> h2(n);
      const std::vector<T>& h = states[si];
      for (int s = 0; s < n; ++s) h2[s] = h[lm.delta[s][d]];
      auto [id, fresh] = intern(std::move(h2));
      if (fresh) {
        queue.push_back(id);
        if (states.size() > kStateCap)
          throw budget_exceeded("reverse_reading state explosion");
      }
      delta[si][d] = id;
    }
  }
  Dfao r;
  r.p = lm.p;
  r.reading = Reading::MSD;
  r.residue_output = lm.residue_output;
  r.out_alpha = lm.out_alpha;
  r.initial = 0;
  r.delta = std::move(delta);
  r.outputs.reserve(states.size());
  for (const auto& h : states) r.outputs.push_back(h[lm.initial]);
  r.zero_invariant = true;
  // Distinct reachable maps are always distinguishable, so this is only a
  // canonical renumbering.
  return minimize(r).first;
}

}  // namespace

Dfao reverse_reading(const Dfao& m) {
  if (m.reading != Reading::LSD)
    throw invalid_parameter("reverse_reading expects an LSD automaton");
  if (!is_zero_invariant(m))
    throw normalization_error("reverse_reading requires a trailing-zero-invariant automaton");
  // Minimizing first is lossless: the maps are constant on classes of
  // behaviourally equivalent states.
  Dfao lm = minimize(m).first;
  uint64_t max_out = 0;
  for (uint64_t o : lm.outputs) max_out = std::max(max_out, o);
  if (max_out < (uint64_t{1} << 16)) return reverse_core<uint16_t>(lm);
  if (max_out < (uint64_t{1} << 32)) return reverse_core<uint32_t>(lm);
  return reverse_core<uint64_t>(lm);
}

std::set<uint64_t> reachable_outputs(const Dfao& m) {
  std::set<uint64_t> out;
  out.insert(m.outputs[m.initial]);
  int n = m.num_states();
  std::vector<char> seen(n, 0);
  std::deque<int> queue;
  if (m.reading == Reading::MSD) {
    for (uint32_t d = 1; d < m.p; ++d) {
      int t = m.delta[m.initial][d];
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      out.insert(m.outputs[s]);
      for (uint32_t d = 0; d < m.p; ++d) {
        int t = m.delta[s][d];
        if (!seen[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
      }
    }
  } else {
    // Reachable under all words; outputs counted where a nonzero edge enters.
    seen[m.initial] = 1;
    queue.push_back(m.initial);
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for (uint32_t d = 0; d < m.p; ++d) {
        int t = m.delta[s][d];
        if (d > 0) out.insert(m.outputs[t]);
        if (!seen[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
      }
    }
  }
  return out;
}

Dfao state_valued(const Dfao& m) {
  Dfao r = m;
  r.residue_output = false;
  r.out_alpha = 0;
  for (int s = 0; s < r.num_states(); ++s) r.outputs[s] = static_cast<uint64_t>(s);
  return r;
}

std::string to_dot(const Dfao& m) {
  std::ostringstream os;
  os << "digraph dfao {\n";
  os << "  rankdir=LR;\n";
  os << "  __init [shape=point];\n";
  os << "  __init -> " << m.initial << ";\n";
  for (int s = 0; s < m.num_states(); ++s)
    os << "  " << s << " [label=\"" << s << "/" << m.outputs[s] << "\"];\n";
  for (int s = 0; s < m.num_states(); ++s)
    for (uint32_t d = 0; d < m.p; ++d)
      os << "  " << s << " -> " << m.delta[s][d] << " [label=\"" << d << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string Dfao::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["reading"] = reading == Reading::MSD ? "msd" : "lsd";
  j["initial"] = initial;
  j["delta"] = delta;
  j["outputs"] = outputs;
  j["residue_output"] = residue_output;
  j["out_alpha"] = out_alpha;
  j["zero_invariant"] = zero_invariant;
  return j.dump(2);
}

Dfao Dfao::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Dfao m;
  m.p = j.at("p").get<uint32_t>();
  std::string r = j.at("reading").get<std::string>();
  if (r == "msd")
    m.reading = Reading::MSD;
  else if (r == "lsd")
    m.reading = Reading::LSD;
  else
    throw invalid_parameter("unknown reading order: " + r);
  m.initial = j.at("initial").get<int>();
  m.delta = j.at("delta").get<std::vector<std::vector<int>>>();
  m.outputs = j.at("outputs").get<std::vector<uint64_t>>();
  m.residue_output = j.value("residue_output", true);
  m.out_alpha = j.value("out_alpha", 0u);
  m.zero_invariant = j.value("zero_invariant", false);
  m.validate();
  return m;
}

}  // namespace padic
