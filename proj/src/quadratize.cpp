#include "qafold/quadratize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qafold/errors.hpp"

namespace qafold::compiler {

namespace {

bool bit(std::uint64_t a, int var) { return (a >> (var - 1)) & 1u; }

}  // namespace

bool Quadratization::consistent(std::uint64_t assignment) const {
  for (const auto& an : ancillas)
    if (bit(assignment, an.index) != (bit(assignment, an.i) && bit(assignment, an.j))) return false;
  return true;
}

std::uint64_t Quadratization::extend(std::uint64_t original) const {
  std::uint64_t a = original;
  for (const auto& an : ancillas)
    if (bit(a, an.i) && bit(a, an.j)) a |= std::uint64_t{1} << (an.index - 1);
  return a;
}

Polynomial and_penalty(int i, int j, int r, const Rational& delta) {
  Polynomial p(std::max({i, j, r}));
  p.add_term({r}, delta * 3);
  p.add_term(make_monomial({i, j}), delta);
  p.add_term(make_monomial({i, r}), delta * -2);
  p.add_term(make_monomial({j, r}), delta * -2);
  return p;
}

Polynomial substitute_pair(const Polynomial& p, int i, int j, int r) {
  Polynomial out(std::max(p.arity(), r));
  for (const auto& [m, c] : p.terms()) {
    bool has_i = std::binary_search(m.begin(), m.end(), i);
    bool has_j = std::binary_search(m.begin(), m.end(), j);
    if (has_i && has_j) {
      std::vector<int> vars;
      for (int v : m)
        if (v != i && v != j) vars.push_back(v);
      vars.push_back(r);
      out.add_term(make_monomial(std::move(vars)), c);
    } else {
      out.add_term(m, c);
    }
  }
  return out;
}

namespace {

void check_collapse(const Polynomial& p, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > p.arity() || j > p.arity())
    throw Error(ErrorKind::plan, "invalid collapse (q" + std::to_string(i) + ", q" + std::to_string(j) + ")");
}

// Values of the substituted polynomial S and of the unit penalty P on all
// violating assignments; the criterion is S + delta * P > 0 for each.
template <typename Fn>
void for_each_violation(const Polynomial& p, int i, int j, Fn&& fn) {
  const int r = p.arity() + 1;
  Polynomial sub = substitute_pair(p, i, j, r);
  sub.set_arity(r);
  Polynomial unit = and_penalty(i, j, r, Rational(1));
  unit.set_arity(r);
  ValueTable s = value_table(sub);
  ValueTable u = value_table(unit);
  for (std::uint64_t a = 0; a < s.values.size(); ++a) {
    if (bit(a, r) == (bit(a, i) && bit(a, j))) continue;
    fn(s.at(a), u.at(a));
  }
}

}  // namespace

bool delta_satisfies(const Polynomial& p, int i, int j, const Rational& delta) {
  check_collapse(p, i, j);
  bool ok = true;
  for_each_violation(p, i, j, [&](const Rational& s, const Rational& unit) {
    if (s + delta * unit <= 0) ok = false;
  });
  return ok;
}

Rational select_delta(const Polynomial& p, int i, int j) {
  check_collapse(p, i, j);
  // The unit penalty is >= 1 on violations, so delta > -S/P is exact per assignment.
  std::int64_t delta = 1;
  for_each_violation(p, i, j, [&](const Rational& s, const Rational& unit) {
    Rational bound = -s / unit;  // need delta > bound
    std::int64_t need = boost::rational_cast<std::int64_t>(bound);  // truncates toward zero
    if (Rational(need) <= bound) ++need;
    delta = std::max(delta, need);
  });
  if (!delta_satisfies(p, i, j, Rational(delta)))
    throw Error(ErrorKind::penalty, "internal: selected delta fails the violation criterion");
  return Rational(delta);
}

std::optional<std::pair<int, int>> greedy_pair(const Polynomial& p) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& [m, c] : p.terms()) {
    if (m.size() < 3) continue;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) ++counts[{m[a], m[b]}];
  }
  if (counts.empty()) return std::nullopt;
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

Quadratization quadratize(const Polynomial& p, const QuadratizationPlan& plan) {
  Quadratization q;
  q.original_arity = p.arity();
  Polynomial current = p;

  auto apply = [&](int i, int j, std::optional<Rational> delta) {
    check_collapse(current, i, j);
    const int r = current.arity() + 1;
    Rational d = delta ? *delta : select_delta(current, i, j);
    if (d <= 0) throw Error(ErrorKind::penalty, "AND penalty must be positive");
    if (delta && !delta_satisfies(current, i, j, d))
      throw Error(ErrorKind::penalty, "delta = " + to_string(d) + " for (q" + std::to_string(i) + ", q" +
                                          std::to_string(j) + ") leaves a violating assignment with E <= 0");
    current = substitute_pair(current, i, j, r) + and_penalty(i, j, r, d);
    current.set_arity(r);
    q.ancillas.push_back({r, i, j, d});
  };

  for (const auto& c : plan.collapses) apply(c.i, c.j, c.delta);
  if (plan.auto_complete)
    while (auto pair = greedy_pair(current)) apply(pair->first, pair->second, std::nullopt);

  if (current.degree() > 2)
    throw Error(ErrorKind::plan, "quadratization plan leaves a monomial of degree " + std::to_string(current.degree()));
  q.quadratic = std::move(current);
  return q;
}

QuadratizationCheck check_quadratization(const Polynomial& original, const Quadratization& q) {
  QuadratizationCheck check;
  ValueTable orig = value_table(original);
  ValueTable quad = value_table(q.quadratic);
  const std::uint64_t orig_mask = (std::uint64_t{1} << q.original_arity) - 1;
  bool first = true;
  for (std::uint64_t a = 0; a < quad.values.size(); ++a) {
    Rational e = quad.at(a);
    if (q.consistent(a)) {
      if (e != orig.at(a & orig_mask)) check.identity_holds = false;
    } else {
      ++check.violating_assignments;
      if (e <= 0) check.violations_positive = false;
      if (first || e < check.min_violation_energy) check.min_violation_energy = e;
      first = false;
    }
  }
  return check;
}

}  // namespace qafold::compiler
