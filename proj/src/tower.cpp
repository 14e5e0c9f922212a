#include "padic/tower.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "json.hpp"
#include "padic/diagonal.hpp"
#include "padic/oracles.hpp"

namespace padic {

namespace {

const char* kind_name(SequenceSpec::Kind k) {
  switch (k) {
    case SequenceSpec::Kind::Algebraic: return "algebraic";
    case SequenceSpec::Kind::Diagonal: return "diagonal";
    case SequenceSpec::Kind::Linrec: return "linrec";
    case SequenceSpec::Kind::Cocycle: return "cocycle";
    case SequenceSpec::Kind::Oracle: return "oracle";
  }
  throw internal_error("unknown spec kind");
}

SequenceSpec::Kind kind_from_name(const std::string& name) {
  if (name == "algebraic") return SequenceSpec::Kind::Algebraic;
  if (name == "diagonal") return SequenceSpec::Kind::Diagonal;
  if (name == "linrec") return SequenceSpec::Kind::Linrec;
  if (name == "cocycle") return SequenceSpec::Kind::Cocycle;
  if (name == "oracle") return SequenceSpec::Kind::Oracle;
  throw invalid_parameter("unknown spec kind: " + name);
}

// Eventually periodic machine: states are values n of the digit prefix,
// clamped into the preperiod + one period window.
Dfao linrec_machine(const SequenceSpec& spec, uint32_t p, uint32_t alpha) {
  uint64_t window = 4096;
  std::vector<uint64_t> a;
  uint64_t rho = 0, lambda = 0;
  for (;;) {
    a = linrec_mod(spec.coeffs, spec.init, window, p, alpha);
    try {
      std::tie(rho, lambda) = detect_period(a);
      break;
    } catch (const invalid_parameter&) {
      if (window >= (uint64_t{1} << 16))
        throw construction_error("linrec_machine: no period within window 2^16");
      window *= 2;
    }
  }
  uint64_t span = rho + lambda;
  auto rep = [&](uint64_t n) { return n < span ? n : rho + (n - rho) % lambda; };
  Dfao m;
  m.p = p;
  m.reading = Reading::MSD;
  m.initial = 0;
  m.residue_output = true;
  m.out_alpha = alpha;
  for (uint64_t s = 0; s < span; ++s) {
    std::vector<int> row;
    for (uint32_t d = 0; d < p; ++d) row.push_back(static_cast<int>(rep(s * p + d)));
    m.delta.push_back(std::move(row));
    m.outputs.push_back(a[s]);
  }
  m.zero_invariant = true;
  return minimize(m).first;
}

Dfao top_machine(const SequenceSpec& spec, uint32_t p, uint32_t alpha) {
  switch (spec.kind) {
    case SequenceSpec::Kind::Algebraic:
      return algebraic_automaton(parse_poly(spec.annihilator), p, alpha);
    case SequenceSpec::Kind::Diagonal: {
      RationalBivar f{parse_poly(spec.num), parse_poly(spec.den)};
      return reverse_reading(diagonal_automaton(f, p, alpha));
    }
    case SequenceSpec::Kind::Linrec:
      return linrec_machine(spec, p, alpha);
    case SequenceSpec::Kind::Cocycle: {
      OrderedDiagram d = OrderedDiagram::parse(p, spec.theta_words);
      return minimize(dfao_from_substitution(cocycle_substitution(d, alpha))).first;
    }
    case SequenceSpec::Kind::Oracle:
      throw invalid_parameter("oracle specs carry values only; automaton inference is disallowed");
  }
  throw internal_error("unknown spec kind");
}

}  // namespace

std::vector<uint64_t> oracle_sequence(const SequenceSpec& spec, uint32_t p, uint32_t alpha,
                                      uint64_t window) {
  if (spec.oracle == "catalan") return catalan_mod(std::min<uint64_t>(window, 1 << 15), p, alpha);
  if (!spec.oracle.empty()) throw invalid_parameter("unknown named oracle: " + spec.oracle);
  switch (spec.kind) {
    case SequenceSpec::Kind::Algebraic: {
      // a(n) = Diag(G)(n + shift); the series budget bounds the window.
      FurstenbergResult fb = furstenberg(parse_poly(spec.annihilator), p);
      uint64_t terms = std::min<uint64_t>(window + fb.shift, 512);
      std::vector<uint64_t> d = diagonal_series(fb.g, terms, p, alpha);
      return {d.begin() + fb.shift, d.end()};
    }
    case SequenceSpec::Kind::Diagonal: {
      RationalBivar f{parse_poly(spec.num), parse_poly(spec.den)};
      return diagonal_series(f, std::min<uint64_t>(window, 512), p, alpha);
    }
    case SequenceSpec::Kind::Linrec:
      return linrec_mod(spec.coeffs, spec.init, window, p, alpha);
    case SequenceSpec::Kind::Cocycle: {
      OrderedDiagram d = OrderedDiagram::parse(p, spec.theta_words);
      std::vector<uint64_t> s = cocycle_sequence(d, window);
      uint64_t mod = pow_checked(p, alpha);
      for (uint64_t& v : s) v %= mod;
      return s;
    }
    case SequenceSpec::Kind::Oracle: {
      uint64_t mod = pow_checked(p, alpha);
      std::vector<uint64_t> s(spec.values.begin(),
                              spec.values.begin() +
                                  std::min<uint64_t>(window, spec.values.size()));
      for (uint64_t& v : s) v %= mod;
      return s;
    }
  }
  throw internal_error("unknown spec kind");
}

std::vector<int> projection_map(const Dfao& m_high, const Dfao& m_low) {
  if (m_high.p != m_low.p) throw invalid_parameter("projection_map: digit alphabets differ");
  if (!m_high.residue_output || !m_low.residue_output)
    throw invalid_parameter("projection_map needs residue outputs");
  if (m_low.out_alpha >= m_high.out_alpha)
    throw invalid_parameter("projection_map: levels are not in increasing order");
  uint64_t mod = pow_checked(m_high.p, m_low.out_alpha);
  Dfao dropped = m_high;
  for (uint64_t& o : dropped.outputs) o %= mod;
  dropped.out_alpha = m_low.out_alpha;
  auto [canon, merge] = minimize(dropped);

  // Initial-rooted isomorphism canon -> m_low; both are canonical minimal
  // machines, so a mismatch means an upstream bug.
  if (canon.num_states() != m_low.num_states())
    throw internal_error("projection_map: projected machine size differs from the lower level");
  std::vector<int> iso(canon.num_states(), -1);
  iso[canon.initial] = m_low.initial;
  std::deque<int> queue{canon.initial};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    if (canon.outputs[s] != m_low.outputs[iso[s]])
      throw internal_error("projection_map: isomorphism matching failed on outputs");
    for (uint32_t d = 0; d < canon.p; ++d) {
      int a = canon.delta[s][d], b = m_low.delta[iso[s]][d];
      if (iso[a] == -1) {
        iso[a] = b;
        queue.push_back(a);
      } else if (iso[a] != b) {
        throw internal_error("projection_map: isomorphism matching failed on transitions");
      }
    }
  }
  std::vector<int> out(m_high.num_states());
  for (int s = 0; s < m_high.num_states(); ++s) {
    if (merge[s] < 0 || iso[merge[s]] < 0)
      throw internal_error("projection_map: unreachable state in a minimal machine");
    out[s] = iso[merge[s]];
  }
  return out;
}

const TowerLevel& Tower::level(uint32_t alpha) const {
  if (alpha == 0 || alpha > top) throw invalid_parameter("tower level out of range");
  return levels[alpha - 1];
}

Tower build_tower(const SequenceSpec& spec, uint32_t p, uint32_t top) {
  if (!is_prime(p)) throw invalid_parameter("p must be prime");
  Tower t;
  t.p = p;
  t.top = top;
  if (top == 0) return t;

  std::vector<Dfao> machines(top + 1);
  machines[top] = top_machine(spec, p, top);
  for (uint32_t a = top; a-- > 1;) {
    Dfao m = machines[a + 1];
    uint64_t mod = pow_checked(p, a);
    for (uint64_t& o : m.outputs) o %= mod;
    m.out_alpha = a;
    machines[a] = minimize(m).first;
  }
  for (uint32_t a = 1; a <= top; ++a) {
    std::vector<uint64_t> expected = oracle_sequence(spec, p, a, 4096);
    for (uint64_t n = 0; n < expected.size(); ++n)
      if (eval(machines[a], n) != expected[n])
        throw construction_error("tower level " + std::to_string(a) +
                                 " disagrees with the oracle at n=" + std::to_string(n));
    TowerLevel lv;
    lv.alpha = a;
    lv.machine = machines[a];
    lv.state_machine = state_valued(machines[a]);
    lv.theta = cobham_extract(machines[a]);
    t.levels.push_back(std::move(lv));
  }
  for (uint32_t a = 1; a < top; ++a)
    t.proj.push_back(projection_map(t.levels[a].machine, t.levels[a - 1].machine));
  return t;
}

bool VerifyReport::all_pass() const {
  for (const auto& it : items)
    if (!it.pass) return false;
  return true;
}

VerifyReport verify_tower(const Tower& t, uint64_t n) {
  VerifyReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& witness) {
    rep.items.push_back({name, pass, pass ? "" : witness});
  };
  for (uint32_t a = 1; a < t.top; ++a) {
    const Dfao& hi = t.level(a + 1).machine;
    const Dfao& lo = t.level(a).machine;
    const std::vector<int>& pr = t.proj[a - 1];
    uint64_t mod = pow_checked(t.p, a);
    std::string tag = "[" + std::to_string(a + 1) + "->" + std::to_string(a) + "]";

    add("proj_initial" + tag, pr[hi.initial] == lo.initial, "initial states differ");

    bool ok = true;
    std::string wit;
    for (int s = 0; ok && s < hi.num_states(); ++s)
      for (uint32_t d = 0; ok && d < t.p; ++d)
        if (pr[hi.delta[s][d]] != lo.delta[pr[s]][d]) {
          ok = false;
          wit = "s=" + std::to_string(s) + " d=" + std::to_string(d);
        }
    add("proj_delta" + tag, ok, wit);

    ok = true;
    for (int s = 0; ok && s < hi.num_states(); ++s)
      if (lo.outputs[pr[s]] != hi.outputs[s] % mod) {
        ok = false;
        wit = "s=" + std::to_string(s);
      }
    add("proj_tau" + tag, ok, wit);

    // Letterwise theta compatibility on the extracted substitutions.
    const Substitution& th = t.level(a + 1).theta;
    const Substitution& tl = t.level(a).theta;
    ok = th.num_letters() == hi.num_states() && tl.num_letters() == lo.num_states();
    wit = "substitution alphabet differs from the state set";
    for (int s = 0; ok && s < th.num_letters(); ++s)
      for (uint32_t r = 0; ok && r < t.p; ++r)
        if (pr[th.images[s][r]] != tl.images[pr[s]][r]) {
          ok = false;
          wit = "letter=" + std::to_string(s) + " r=" + std::to_string(r);
        }
    add("theta_letters" + tag, ok, wit);

    std::vector<int> uh = fixed_point_letters(th, n);
    std::vector<int> ul = fixed_point_letters(tl, n);
    ok = true;
    for (uint64_t i = 0; ok && i < n; ++i)
      if (pr[uh[i]] != ul[i]) {
        ok = false;
        wit = "i=" + std::to_string(i);
      }
    add("sequence_prefix" + tag, ok, wit);

    ok = true;
    for (uint64_t i = 0; ok && i + 1 < n; ++i)
      if (pr[uh[i + 1]] != ul[i + 1]) {
        ok = false;
        wit = "i=" + std::to_string(i);
      }
    add("shift_commute" + tag, ok, wit);

    ok = true;
    for (uint64_t i = 0; ok && i < n; ++i)
      if (eval(hi, i) % mod != eval(lo, i)) {
        ok = false;
        wit = "n=" + std::to_string(i);
      }
    add("eval_coherence" + tag, ok, wit);
  }
  return rep;
}

ResidueTree residue_tree(const Tower& t) {
  ResidueTree tree;
  tree.p = t.p;
  tree.levels.push_back({0});
  for (uint32_t a = 1; a <= t.top; ++a) {
    std::set<uint64_t> vals = reachable_outputs(t.level(a).machine);
    uint64_t parent_mod = pow_checked(t.p, a - 1);
    const std::vector<uint64_t>& parents = tree.levels[a - 1];
    for (uint64_t v : vals)
      if (!std::binary_search(parents.begin(), parents.end(), v % parent_mod))
        throw internal_error("residue_tree: vertex " + std::to_string(v) + " at level " +
                             std::to_string(a) + " has no parent");
    tree.levels.emplace_back(vals.begin(), vals.end());
  }
  return tree;
}

std::set<uint64_t> forbidden_residues(const Tower& t, uint32_t alpha) {
  if (alpha > t.top) throw invalid_parameter("level above the tower top");
  ResidueTree tree = residue_tree(t);
  std::set<uint64_t> out;
  uint64_t mod = pow_checked(t.p, alpha);
  const std::vector<uint64_t>& present = tree.levels[alpha];
  for (uint64_t v = 0; v < mod; ++v)
    if (!std::binary_search(present.begin(), present.end(), v)) out.insert(v);
  return out;
}

std::string residue_tree_to_dot(const ResidueTree& tree) {
  std::string out = "digraph residue_tree {\n  rankdir=TB;\n";
  for (size_t a = 0; a < tree.levels.size(); ++a)
    for (uint64_t v : tree.levels[a])
      out += "  L" + std::to_string(a) + "_" + std::to_string(v) + " [label=\"" +
             std::to_string(v) + "\"];\n";
  for (size_t a = 1; a < tree.levels.size(); ++a) {
    uint64_t parent_mod = 1;
    for (size_t k = 1; k < a; ++k) parent_mod *= tree.p;
    for (uint64_t v : tree.levels[a])
      out += "  L" + std::to_string(a - 1) + "_" + std::to_string(v % parent_mod) + " -> L" +
             std::to_string(a) + "_" + std::to_string(v) + ";\n";
  }
  out += "}\n";
  return out;
}

std::string residue_tree_to_json(const ResidueTree& tree) {
  nlohmann::ordered_json j;
  j["p"] = tree.p;
  j["levels"] = tree.levels;
  return j.dump(2);
}

std::set<int> letter_preimages(const Tower& t, uint32_t alpha, int state) {
  if (alpha == 0 || alpha >= t.top)
    throw invalid_parameter("letter_preimages needs 1 <= alpha < top");
  if (state < 0 || state >= t.level(alpha).machine.num_states())
    throw invalid_parameter("unknown state at level " + std::to_string(alpha));
  std::set<int> out;
  const std::vector<int>& pr = t.proj[alpha - 1];
  for (size_t s = 0; s < pr.size(); ++s)
    if (pr[s] == state) out.insert(static_cast<int>(s));
  return out;
}

std::string SequenceSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(kind);
  switch (kind) {
    case Kind::Algebraic: j["annihilator"] = annihilator; break;
    case Kind::Diagonal:
      j["num"] = num;
      j["den"] = den;
      break;
    case Kind::Linrec:
      j["coeffs"] = coeffs;
      j["init"] = init;
      break;
    case Kind::Cocycle: j["theta"] = theta_words; break;
    case Kind::Oracle: j["values"] = values; break;
  }
  if (!oracle.empty()) j["oracle"] = oracle;
  return j.dump(2);
}

SequenceSpec SequenceSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("sequence spec JSON: ") + e.what(), 0, 0);
  }
  SequenceSpec s;
  try {
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    switch (s.kind) {
      case Kind::Algebraic: s.annihilator = j.at("annihilator").get<std::string>(); break;
      case Kind::Diagonal:
        s.num = j.at("num").get<std::string>();
        s.den = j.at("den").get<std::string>();
        break;
      case Kind::Linrec:
        s.coeffs = j.at("coeffs").get<std::vector<int64_t>>();
        s.init = j.at("init").get<std::vector<int64_t>>();
        break;
      case Kind::Cocycle: s.theta_words = j.at("theta").get<std::string>(); break;
      case Kind::Oracle: s.values = j.at("values").get<std::vector<uint64_t>>(); break;
    }
    s.oracle = j.value("oracle", "");
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("sequence spec JSON: ") + e.what(), 0, 0);
  }
  return s;
}

std::string Tower::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["top"] = top;
  nlohmann::ordered_json lv = nlohmann::ordered_json::array();
  for (const auto& l : levels) {
    nlohmann::ordered_json e;
    e["alpha"] = l.alpha;
    e["machine"] = nlohmann::ordered_json::parse(l.machine.to_json());
    e["substitution"] = nlohmann::ordered_json::parse(l.theta.to_json());
    lv.push_back(std::move(e));
  }
  j["levels"] = std::move(lv);
  j["proj"] = proj;
  return j.dump(2);
}

Tower Tower::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("tower JSON: ") + e.what(), 0, 0);
  }
  Tower t;
  try {
    t.p = j.at("p").get<uint32_t>();
    t.top = j.at("top").get<uint32_t>();
    for (const auto& e : j.at("levels")) {
      TowerLevel l;
      l.alpha = e.at("alpha").get<uint32_t>();
      l.machine = Dfao::from_json(e.at("machine").dump());
      l.state_machine = state_valued(l.machine);
      l.theta = Substitution::from_json(e.at("substitution").dump());
      t.levels.push_back(std::move(l));
    }
    t.proj = j.at("proj").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("tower JSON: ") + e.what(), 0, 0);
  }
  if (t.levels.size() != t.top || (t.top > 0 && t.proj.size() != t.top - 1))
    throw invalid_parameter("tower JSON: level/projection counts are inconsistent");
  return t;
}

}  // namespace padic
