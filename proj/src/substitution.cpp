#include "padic/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

namespace padic {

void Substitution::validate() const {
  if (!is_prime(p)) throw invalid_parameter("substitution length must be prime");
  int m = num_letters();
  if (m == 0) throw invalid_parameter("empty alphabet");
  if (alphabet.size() != images.size()) throw invalid_parameter("alphabet/images size mismatch");
  if (seed < 0 || seed >= m) throw invalid_parameter("seed out of range");
  for (const auto& w : images) {
    if (w.size() != p) throw invalid_parameter("image length differs from p");
    for (int l : w)
      if (l < 0 || l >= m) throw invalid_parameter("image letter out of range");
  }
  if (images[seed][0] != seed)
    throw invalid_parameter("seed is not a fixed prefix: images[seed][0] != seed");
  if (has_coding && coding.size() != images.size())
    throw invalid_parameter("coding size mismatch");
}

Substitution cobham_extract(const Dfao& m) {
  if (m.reading != Reading::MSD)
    throw invalid_parameter("cobham_extract expects a direct-reading automaton");
  m.validate();
  Substitution s;
  s.p = m.p;
  int n = m.num_states();
  for (int i = 0; i < n; ++i) s.alphabet.push_back("s" + std::to_string(i));
  s.images.resize(n);
  for (int i = 0; i < n; ++i)
    for (uint32_t d = 0; d < m.p; ++d) s.images[i].push_back(m.delta[i][d]);
  s.has_coding = true;
  s.coding = m.outputs;
  s.coding_residue = m.residue_output;
  s.coding_alpha = m.out_alpha;
  if (m.delta[m.initial][0] == m.initial) {
    s.seed = m.initial;
  } else {
    // Fresh seed letter s0' with image s0' delta(s0,1) ... delta(s0,p-1).
    int fresh = n;
    s.alphabet.push_back("s" + std::to_string(m.initial) + "'");
    std::vector<int> img;
    img.push_back(fresh);
    for (uint32_t d = 1; d < m.p; ++d) img.push_back(m.delta[m.initial][d]);
    s.images.push_back(std::move(img));
    s.coding.push_back(m.outputs[m.initial]);
    s.seed = fresh;
  }
  s.validate();
  return s;
}

std::vector<int> fixed_point_letters(const Substitution& s, uint64_t n) {
  s.validate();
  std::vector<int> u(n);
  if (n == 0) return u;
  u[0] = s.seed;
  // u(p k + r) = images[u(k)][r]; p k + r >= k, with equality only at 0.
  for (uint64_t k = 0; k * s.p < n; ++k)
    for (uint32_t r = 0; r < s.p; ++r) {
      uint64_t idx = k * s.p + r;
      if (idx > 0 && idx < n) u[idx] = s.images[u[k]][r];
    }
  return u;
}

std::vector<uint64_t> fixed_point(const Substitution& s, uint64_t n) {
  std::vector<int> u = fixed_point_letters(s, n);
  std::vector<uint64_t> w(u.size());
  for (size_t i = 0; i < u.size(); ++i)
    w[i] = s.has_coding ? s.coding[u[i]] : static_cast<uint64_t>(u[i]);
  return w;
}

Dfao dfao_from_substitution(const Substitution& s) {
  s.validate();
  Dfao m;
  m.p = s.p;
  m.reading = Reading::MSD;
  m.initial = s.seed;
  m.delta.resize(s.num_letters());
  for (int l = 0; l < s.num_letters(); ++l)
    for (uint32_t r = 0; r < s.p; ++r) m.delta[l].push_back(s.images[l][r]);
  if (s.has_coding) {
    m.outputs = s.coding;
    m.residue_output = s.coding_residue;
    m.out_alpha = s.coding_alpha;
  } else {
    for (int l = 0; l < s.num_letters(); ++l) m.outputs.push_back(l);
    m.residue_output = false;
    m.out_alpha = 0;
  }
  m.zero_invariant = is_zero_invariant(m);
  return m;
}

IncidenceMatrix incidence(const Substitution& s) {
  s.validate();
  int m = s.num_letters();
  IncidenceMatrix inc(m, std::vector<uint64_t>(m, 0));
  for (int j = 0; j < m; ++j)
    for (int l : s.images[j]) ++inc[l][j];
  return inc;
}

namespace {

// Boolean matrices as bit rows.
using BitMatrix = std::vector<std::vector<uint64_t>>;

BitMatrix bool_mul(const BitMatrix& a, const BitMatrix& b, int m) {
  size_t words = (m + 63) / 64;
  BitMatrix c(m, std::vector<uint64_t>(words, 0));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      if (a[i][k >> 6] & (uint64_t{1} << (k & 63)))
        for (size_t w = 0; w < words; ++w) c[i][w] |= b[k][w];
  return c;
}

bool all_positive(const BitMatrix& a, int m) {
  size_t words = (m + 63) / 64;
  for (int i = 0; i < m; ++i)
    for (size_t w = 0; w < words; ++w) {
      uint64_t want = w + 1 < words ? ~uint64_t{0}
                                    : (m % 64 == 0 ? ~uint64_t{0}
                                                   : (uint64_t{1} << (m % 64)) - 1);
      if ((a[i][w] & want) != want) return false;
    }
  return true;
}

}  // namespace

bool is_primitive(const IncidenceMatrix& mat) {
  int m = static_cast<int>(mat.size());
  if (m == 0) throw invalid_parameter("empty matrix");
  size_t words = (m + 63) / 64;
  BitMatrix b(m, std::vector<uint64_t>(words, 0));
  for (int i = 0; i < m; ++i) {
    if (mat[i].size() != static_cast<size_t>(m)) throw invalid_parameter("matrix not square");
    for (int j = 0; j < m; ++j)
      if (mat[i][j] > 0) b[i][j >> 6] |= uint64_t{1} << (j & 63);
  }
  // Positivity of powers is monotone here (columns are nonzero), so it is
  // enough to square up past the Wielandt bound (m-1)^2 + 1.
  uint64_t bound = static_cast<uint64_t>(m - 1) * (m - 1) + 1;
  uint64_t k = 1;
  BitMatrix pw = b;
  for (;;) {
    if (all_positive(pw, m)) return true;
    if (k >= bound) return false;
    pw = bool_mul(pw, pw, m);
    k *= 2;
  }
}

std::vector<double> letter_frequencies(const Substitution& s, double tol) {
  IncidenceMatrix inc = incidence(s);
  if (!is_primitive(inc))
    throw not_supported("letter_frequencies: substitution is not primitive");
  int m = s.num_letters();
  std::vector<double> f(m, 1.0 / m), g(m);
  for (int iter = 0; iter < 1 << 20; ++iter) {
    double diff = 0;
    for (int i = 0; i < m; ++i) {
      double acc = 0;
      for (int j = 0; j < m; ++j) acc += static_cast<double>(inc[i][j]) * f[j];
      g[i] = acc / s.p;
    }
    for (int i = 0; i < m; ++i) diff = std::max(diff, std::abs(g[i] - f[i]));
    f.swap(g);
    if (diff < tol) return f;
  }
  throw internal_error("letter_frequencies: power iteration did not converge");
}

std::string Substitution::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["alphabet"] = alphabet;
  nlohmann::ordered_json imgs = nlohmann::ordered_json::object();
  for (size_t l = 0; l < images.size(); ++l) {
    std::vector<std::string> w;
    for (int t : images[l]) w.push_back(alphabet[t]);
    imgs[alphabet[l]] = w;
  }
  j["images"] = imgs;
  j["seed"] = alphabet[seed];
  if (has_coding) {
    nlohmann::ordered_json cod = nlohmann::ordered_json::object();
    for (size_t l = 0; l < coding.size(); ++l) cod[alphabet[l]] = coding[l];
    j["coding"] = cod;
    j["coding_residue"] = coding_residue;
    j["coding_alpha"] = coding_alpha;
  }
  return j.dump(2);
}

Substitution Substitution::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("substitution JSON: ") + e.what(), 0, 0);
  }
  Substitution s;
  try {
    s.p = j.at("p").get<uint32_t>();
    s.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    std::map<std::string, int> idx;
    for (size_t l = 0; l < s.alphabet.size(); ++l) idx[s.alphabet[l]] = static_cast<int>(l);
    auto lookup = [&](const std::string& name) {
      auto it = idx.find(name);
      if (it == idx.end()) throw invalid_parameter("unknown letter: " + name);
      return it->second;
    };
    s.images.resize(s.alphabet.size());
    for (const auto& [name, w] : j.at("images").items()) {
      std::vector<int> img;
      for (const auto& t : w) img.push_back(lookup(t.get<std::string>()));
      s.images[lookup(name)] = std::move(img);
    }
    s.seed = lookup(j.at("seed").get<std::string>());
    if (j.contains("coding")) {
      s.has_coding = true;
      s.coding.assign(s.alphabet.size(), 0);
      for (const auto& [name, v] : j.at("coding").items())
        s.coding[lookup(name)] = v.get<uint64_t>();
      s.coding_residue = j.value("coding_residue", false);
      s.coding_alpha = j.value("coding_alpha", 0u);
    }
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("substitution JSON: ") + e.what(), 0, 0);
  }
  s.validate();
  return s;
}

}  // namespace padic
