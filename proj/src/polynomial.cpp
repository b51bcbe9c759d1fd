#include "qafold/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qafold/errors.hpp"

namespace qafold::compiler {

Monomial make_monomial(std::vector<int> vars) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::uint64_t monomial_mask(const Monomial& m) {
  std::uint64_t mask = 0;
  for (int v : m) {
    if (v < 1 || v > 64) throw Error(ErrorKind::capacity, "variable index out of mask range: q" + std::to_string(v));
    mask |= std::uint64_t{1} << (v - 1);
  }
  return mask;
}

namespace {

// Coefficient, optional "/den", then q<idx> factors.
struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '*')) ++pos;
  }
  bool at_end() {
    skip();
    return pos >= s.size();
  }
  bool digit() { return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); }
  std::int64_t integer() {
    std::int64_t v = 0;
    if (!digit()) throw Error(ErrorKind::validation, "expected a number at offset " + std::to_string(pos) + " in '" + s + "'");
    while (digit()) v = v * 10 + (s[pos++] - '0');
    return v;
  }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int arity) {
  Polynomial p(0);
  Lexer lx{text};
  bool first = true;
  int max_var = 0;
  while (!lx.at_end()) {
    int sign = 1;
    if (text[lx.pos] == '+' || text[lx.pos] == '-') {
      sign = text[lx.pos] == '-' ? -1 : 1;
      ++lx.pos;
      lx.skip();
    } else if (!first) {
      throw Error(ErrorKind::validation, "expected '+' or '-' at offset " + std::to_string(lx.pos) + " in '" + text + "'");
    }
    first = false;
    Rational coef(1);
    bool has_coef = false;
    if (lx.digit()) {
      std::int64_t num = lx.integer();
      std::int64_t den = 1;
      lx.skip();
      if (lx.pos < text.size() && text[lx.pos] == '/') {
        ++lx.pos;
        lx.skip();
        den = lx.integer();
      }
      coef = Rational(num, den);
      has_coef = true;
    }
    std::vector<int> vars;
    while (true) {
      lx.skip();
      if (lx.pos < text.size() && text[lx.pos] == 'q') {
        ++lx.pos;
        if (lx.pos < text.size() && text[lx.pos] == '_') ++lx.pos;
        int v = static_cast<int>(lx.integer());
        if (v < 1) throw Error(ErrorKind::validation, "variable indices start at 1");
        vars.push_back(v);
        max_var = std::max(max_var, v);
      } else {
        break;
      }
    }
    if (!has_coef && vars.empty())
      throw Error(ErrorKind::validation, "empty term at offset " + std::to_string(lx.pos) + " in '" + text + "'");
    p.add_term(make_monomial(vars), coef * sign);
  }
  p.arity_ = arity >= 0 ? arity : max_var;
  if (max_var > p.arity_) throw Error(ErrorKind::validation, "polynomial uses q" + std::to_string(max_var) + " beyond its arity");
  return p;
}

void Polynomial::set_arity(int arity) {
  for (const auto& [m, c] : terms_)
    if (!m.empty() && m.back() > arity) throw Error(ErrorKind::validation, "arity smaller than largest variable index");
  arity_ = arity;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(m.size()));
  return d;
}

void Polynomial::add_term(Monomial m, const Rational& c) {
  if (c == 0) return;
  if (!m.empty()) arity_ = std::max(arity_, m.back());
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::evaluate(std::uint64_t assignment) const {
  Rational e(0);
  for (const auto& [m, c] : terms_) {
    bool on = true;
    for (int v : m)
      if (!((assignment >> (v - 1)) & 1u)) {
        on = false;
        break;
      }
    if (on) e += c;
  }
  return e;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  arity_ = std::max(arity_, o.arity_);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator*(const Rational& s) const {
  Polynomial r(arity_);
  if (s == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1 || m.empty()) {
      os << qafold::to_string(mag);
      if (!m.empty() && mag.denominator() != 1) os << ' ';
    }
    for (int v : m) os << 'q' << v;
  }
  return os.str();
}

Polynomial interpolate_polynomial(const std::function<Rational(std::uint64_t)>& oracle, int arity) {
  if (arity < 0 || arity > kMaxExhaustiveVars)
    throw Error(ErrorKind::capacity, "interpolation limited to " + std::to_string(kMaxExhaustiveVars) + " variables");
  const std::size_t size = std::size_t{1} << arity;
  std::vector<Rational> c(size);
  for (std::uint64_t a = 0; a < size; ++a) c[a] = oracle(a);
  // In-place Moebius transform: c[S] = sum_{T subset S} (-1)^{|S|-|T|} f(T).
  for (int bit = 0; bit < arity; ++bit)
    for (std::uint64_t a = 0; a < size; ++a)
      if ((a >> bit) & 1u) c[a] -= c[a ^ (std::uint64_t{1} << bit)];
  Polynomial p(arity);
  for (std::uint64_t a = 0; a < size; ++a) {
    if (c[a] == 0) continue;
    Monomial m;
    for (int bit = 0; bit < arity; ++bit)
      if ((a >> bit) & 1u) m.push_back(bit + 1);
    p.add_term(std::move(m), c[a]);
  }
  return p;
}

Polynomial fix_variables(const Polynomial& p, const std::map<int, int>& bindings, bool relabel) {
  for (auto [var, value] : bindings) {
    if (var < 1 || var > p.arity()) throw Error(ErrorKind::validation, "cannot fix unknown variable q" + std::to_string(var));
    if (value != 0 && value != 1) throw Error(ErrorKind::validation, "binary variables take values 0 or 1");
  }
  std::vector<int> new_index(p.arity() + 1, 0);
  int next = 0;
  for (int v = 1; v <= p.arity(); ++v)
    if (!bindings.count(v)) new_index[v] = relabel ? ++next : v;
  Polynomial out(relabel ? next : p.arity());
  for (const auto& [m, c] : p.terms()) {
    Monomial kept;
    bool zero = false;
    for (int v : m) {
      auto it = bindings.find(v);
      if (it == bindings.end()) kept.push_back(new_index[v]);
      else if (it->second == 0) {
        zero = true;
        break;
      }
    }
    if (!zero) out.add_term(std::move(kept), c);
  }
  out.set_arity(relabel ? next : p.arity());
  return out;
}

ValueTable value_table(const Polynomial& p) {
  const int n = p.arity();
  if (n > kMaxExhaustiveVars)
    throw Error(ErrorKind::capacity, "exhaustive evaluation limited to " + std::to_string(kMaxExhaustiveVars) +
                                         " variables, got " + std::to_string(n));
  ValueTable t;
  for (const auto& [m, c] : p.terms()) t.denominator = lcm_denominator(t.denominator, c);
  const std::size_t size = std::size_t{1} << n;
  t.values.assign(size, 0);
  for (const auto& [m, c] : p.terms())
    t.values[monomial_mask(m)] += c.numerator() * (t.denominator / c.denominator());
  // Zeta transform over subsets: value(a) = sum of coefficients of monomials contained in a.
  for (int bit = 0; bit < n; ++bit)
    for (std::uint64_t a = 0; a < size; ++a)
      if ((a >> bit) & 1u) t.values[a] += t.values[a ^ (std::uint64_t{1} << bit)];
  return t;
}

}  // namespace qafold::compiler
