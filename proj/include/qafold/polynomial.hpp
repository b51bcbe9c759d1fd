#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qafold/rational.hpp"

namespace qafold::compiler {

/// Sorted, duplicate-free list of 1-based variable indices. Empty = constant.
using Monomial = std::vector<int>;

/// Orders monomials by degree, then lexicographically.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

Monomial make_monomial(std::vector<int> vars);
std::uint64_t monomial_mask(const Monomial& m);

/// Multilinear pseudo-Boolean function over q_1..q_arity with exact coefficients.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialLess>;

  Polynomial() = default;
  explicit Polynomial(int arity) : arity_(arity) {}

  /// Parses "4 - 3q1 + 4q2 - 4q1q2 + 13/4 q1q3". Repeated indices in a
  /// monomial collapse (q*q = q). Arity defaults to the largest index seen.
  static Polynomial parse(const std::string& text, int arity = -1);

  int arity() const { return arity_; }
  void set_arity(int arity);
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int degree() const;

  void add_term(Monomial m, const Rational& c);
  Rational coefficient(const Monomial& m) const;
  Rational constant() const { return coefficient({}); }

  /// Variable k is bit k-1 of the mask.
  Rational evaluate(std::uint64_t assignment) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Rational& s) const;
  bool operator==(const Polynomial& o) const { return arity_ == o.arity_ && terms_ == o.terms_; }

  std::string to_string() const;

 private:
  int arity_ = 0;
  Terms terms_;
};

inline constexpr int kMaxExhaustiveVars = 24;

/// Multilinear interpolation of an arbitrary function on {0,1}^arity
/// (Moebius inversion over the subset lattice).
Polynomial interpolate_polynomial(const std::function<Rational(std::uint64_t)>& oracle, int arity);

/// Substitutes constants for the bound variables. With relabel, the
/// surviving variables are renumbered 1..l' keeping their order.
Polynomial fix_variables(const Polynomial& p, const std::map<int, int>& bindings, bool relabel);

/// Exact values on every assignment, scaled to integers: value(a) = values[a] / denominator.
struct ValueTable {
  std::vector<std::int64_t> values;
  std::int64_t denominator = 1;
  Rational at(std::uint64_t a) const { return Rational(values[a], denominator); }
};

ValueTable value_table(const Polynomial& p);

}  // namespace qafold::compiler
