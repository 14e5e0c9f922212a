#include "padic/bivar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace padic {

namespace {

int64_t norm_coeff(int64_t c, uint64_t mod) {
  if (mod == 0) return c;
  int64_t m = static_cast<int64_t>(mod);
  int64_t r = c % m;
  if (r < 0) r += m;
  return r;
}

uint64_t term_key(int64_t i, int64_t j) {
  return (static_cast<uint64_t>(i) << 32) | static_cast<uint64_t>(j);
}

BivarPoly from_map(std::unordered_map<uint64_t, int64_t>&& acc, uint64_t mod) {
  BivarPoly r;
  r.terms.reserve(acc.size());
  for (auto& [k, c] : acc) {
    int64_t cc = norm_coeff(c, mod);
    if (cc != 0)
      r.terms.push_back({static_cast<int64_t>(k >> 32),
                         static_cast<int64_t>(k & 0xffffffffu), cc});
  }
  std::sort(r.terms.begin(), r.terms.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return r;
}

}  // namespace

int64_t BivarPoly::deg_x() const {
  int64_t d = 0;
  for (const auto& t : terms) d = std::max(d, t.i);
  return d;
}

int64_t BivarPoly::deg_y() const {
  int64_t d = 0;
  for (const auto& t : terms) d = std::max(d, t.j);
  return d;
}

int64_t BivarPoly::coeff(int64_t i, int64_t j) const {
  for (const auto& t : terms)
    if (t.i == i && t.j == j) return t.c;
  return 0;
}

bool BivarPoly::operator==(const BivarPoly& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (size_t k = 0; k < terms.size(); ++k)
    if (terms[k].i != o.terms[k].i || terms[k].j != o.terms[k].j || terms[k].c != o.terms[k].c)
      return false;
  return true;
}

bool BivarPoly::operator<(const BivarPoly& o) const {
  return std::lexicographical_compare(
      terms.begin(), terms.end(), o.terms.begin(), o.terms.end(),
      [](const Term& a, const Term& b) {
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.c < b.c;
      });
}

BivarPoly BivarPoly::constant(int64_t c) { return monomial(0, 0, c); }

BivarPoly BivarPoly::monomial(int64_t i, int64_t j, int64_t c) {
  BivarPoly r;
  if (c != 0) r.terms.push_back({i, j, c});
  return r;
}

BivarPoly add(const BivarPoly& a, const BivarPoly& b, uint64_t mod) {
  std::unordered_map<uint64_t, int64_t> acc;
  acc.reserve(a.terms.size() + b.terms.size());
  for (const auto& t : a.terms) acc[term_key(t.i, t.j)] += t.c;
  for (const auto& t : b.terms) acc[term_key(t.i, t.j)] += t.c;
  return from_map(std::move(acc), mod);
}

BivarPoly sub(const BivarPoly& a, const BivarPoly& b, uint64_t mod) {
  std::unordered_map<uint64_t, int64_t> acc;
  acc.reserve(a.terms.size() + b.terms.size());
  for (const auto& t : a.terms) acc[term_key(t.i, t.j)] += t.c;
  for (const auto& t : b.terms) acc[term_key(t.i, t.j)] -= t.c;
  return from_map(std::move(acc), mod);
}

BivarPoly mul(const BivarPoly& a, const BivarPoly& b, uint64_t mod) {
  std::unordered_map<uint64_t, int64_t> acc;
  acc.reserve(a.terms.size() + b.terms.size());
  if (mod != 0) {
    for (const auto& s : a.terms)
      for (const auto& t : b.terms) {
        int64_t& slot = acc[term_key(s.i + t.i, s.j + t.j)];
        slot = static_cast<int64_t>(
            (static_cast<unsigned __int128>(slot) +
             static_cast<unsigned __int128>(s.c) * static_cast<uint64_t>(t.c)) %
            mod);
      }
  } else {
    for (const auto& s : a.terms)
      for (const auto& t : b.terms) acc[term_key(s.i + t.i, s.j + t.j)] += s.c * t.c;
  }
  return from_map(std::move(acc), mod);
}

BivarPoly pow(const BivarPoly& a, uint64_t e, uint64_t mod) {
  BivarPoly r = BivarPoly::constant(1);
  if (mod != 0) r = reduce(r, mod);
  BivarPoly base = a;
  while (e) {
    if (e & 1) r = mul(r, base, mod);
    e >>= 1;
    if (e) base = mul(base, base, mod);
  }
  return r;
}

BivarPoly reduce(const BivarPoly& a, uint64_t mod) {
  BivarPoly r;
  for (const auto& t : a.terms) {
    int64_t c = norm_coeff(t.c, mod);
    if (c != 0) r.terms.push_back({t.i, t.j, c});
  }
  return r;
}

BivarPoly derivative_y(const BivarPoly& a) {
  BivarPoly r;
  for (const auto& t : a.terms)
    if (t.j > 0) r.terms.push_back({t.i, t.j - 1, t.c * t.j});
  return r;
}

BivarPoly cartier(const BivarPoly& a, uint32_t r, uint32_t s, uint32_t p) {
  if (r >= p || s >= p) throw invalid_parameter("cartier digit out of range");
  BivarPoly out;
  for (const auto& t : a.terms)
    if (t.i % p == r && t.j % p == s) out.terms.push_back({t.i / p, t.j / p, t.c});
  return out;
}

std::string BivarPoly::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : terms) j.push_back({t.i, t.j, t.c});
  return j.dump();
}

BivarPoly BivarPoly::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  BivarPoly r;
  for (const auto& t : j)
    r.terms.push_back({t.at(0).get<int64_t>(), t.at(1).get<int64_t>(), t.at(2).get<int64_t>()});
  std::sort(r.terms.begin(), r.terms.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return r;
}

std::string BivarPoly::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    int64_t c = t.c;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    int64_t ac = c < 0 ? -c : c;
    bool hasvar = t.i > 0 || t.j > 0;
    if (ac != 1 || !hasvar) os << ac;
    if (t.i > 0) {
      if (ac != 1) os << "*";
      os << "x";
      if (t.i > 1) os << "^" << t.i;
    }
    if (t.j > 0) {
      if (ac != 1 || t.i > 0) os << "*";
      os << "y";
      if (t.j > 1) os << "^" << t.j;
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  BivarPoly parse() {
    BivarPoly r = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, line_, col_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  int peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : -1;
  }

  BivarPoly expr() {
    bool neg = false;
    if (peek() == '-') {
      advance();
      neg = true;
    } else if (peek() == '+') {
      advance();
    }
    BivarPoly r = term();
    if (neg) r = sub(BivarPoly(), r);
    for (;;) {
      int c = peek();
      if (c == '+') {
        advance();
        r = add(r, term());
      } else if (c == '-') {
        advance();
        r = sub(r, term());
      } else {
        return r;
      }
    }
  }

  BivarPoly term() {
    BivarPoly r = factor();
    while (peek() == '*') {
      advance();
      r = mul(r, factor());
    }
    return r;
  }

  BivarPoly factor() {
    BivarPoly base = atom();
    if (peek() == '^') {
      advance();
      uint64_t e = natural();
      return pow(base, e, 0);
    }
    return base;
  }

  BivarPoly atom() {
    int c = peek();
    if (c == '(') {
      advance();
      BivarPoly r = expr();
      if (peek() != ')') fail("expected ')'");
      advance();
      return r;
    }
    if (c == 'x') {
      advance();
      return BivarPoly::monomial(1, 0, 1);
    }
    if (c == 'y') {
      advance();
      return BivarPoly::monomial(0, 1, 1);
    }
    if (c == '-') {
      advance();
      return sub(BivarPoly(), atom());
    }
    if (std::isdigit(c)) return BivarPoly::constant(static_cast<int64_t>(natural()));
    fail("expected a number, 'x', 'y', or '('");
  }

  uint64_t natural() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected a number");
    uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > (uint64_t{1} << 40)) fail("number too large");
      advance();
    }
    return v;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

BivarPoly parse_poly(const std::string& text) { return Parser(text).parse(); }

}  // namespace padic
