#pragma once

#include <optional>
#include <vector>

#include "qafold/polynomial.hpp"

namespace qafold::compiler {

/// q_i q_j -> fresh ancilla. delta unset means auto-select.
struct Collapse {
  int i = 0;
  int j = 0;
  std::optional<Rational> delta;
};

struct QuadratizationPlan {
  std::vector<Collapse> collapses;
  /// Keep collapsing greedily after the explicit list until the degree is <= 2.
  bool auto_complete = false;

  static QuadratizationPlan automatic() { return {{}, true}; }
};

struct Ancilla {
  int index = 0;  // ancilla variable (1-based)
  int i = 0;
  int j = 0;
  Rational delta;
};

struct Quadratization {
  Polynomial quadratic;
  int original_arity = 0;
  std::vector<Ancilla> ancillas;

  /// True when every ancilla equals the product it stands for.
  bool consistent(std::uint64_t assignment) const;
  /// Extends an assignment of the original variables with consistent ancillas.
  std::uint64_t extend(std::uint64_t original) const;
};

/// delta (3r + q_i q_j - 2 q_i r - 2 q_j r): zero iff r = q_i q_j, at least delta otherwise.
Polynomial and_penalty(int i, int j, int r, const Rational& delta);

/// Replaces q_i q_j by q_r in every monomial containing both, including the bare quadratic term.
Polynomial substitute_pair(const Polynomial& p, int i, int j, int r);

/// Smallest integer delta >= 1 such that, after collapsing (i, j) into a fresh
/// ancilla, every assignment violating the AND condition has energy > 0 and
/// above every consistent energy <= 0. Checked exhaustively.
Rational select_delta(const Polynomial& p, int i, int j);

/// True when every violating assignment of (substitute_pair(p) + penalty) is strictly positive.
bool delta_satisfies(const Polynomial& p, int i, int j, const Rational& delta);

/// Pair that appears in the most monomials of degree >= 3 (ties: smallest (i, j)).
std::optional<std::pair<int, int>> greedy_pair(const Polynomial& p);

Quadratization quadratize(const Polynomial& p, const QuadratizationPlan& plan);

struct QuadratizationCheck {
  bool identity_holds = true;       // consistent subspace reproduces the original
  bool violations_positive = true;  // every inconsistent assignment has E > 0
  Rational min_violation_energy;
  std::size_t violating_assignments = 0;
};

QuadratizationCheck check_quadratization(const Polynomial& original, const Quadratization& q);

}  // namespace qafold::compiler
