#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qafold/polynomial.hpp"

namespace qafold::ising {

using compiler::Polynomial;

/// E(s) = sum h_i s_i + sum_{i<j} J_ij s_i s_j over s in {+1,-1}^n (0-based spins).
/// The binary energy it stands for is scale * E(s) + offset, with q_i = (1 - s_i)/2.
/// Assignment masks follow the binary side: bit i set means q_{i+1} = 1, s_i = -1.
struct IsingModel {
  int n = 0;
  std::vector<Rational> h;
  std::map<std::pair<int, int>, Rational> J;  // keys (i, j) with i < j, no zeros
  Rational offset{0};
  Rational scale{1};

  IsingModel() = default;
  explicit IsingModel(int spins) : n(spins), h(spins) {}

  Rational coupling(int i, int j) const;
  void add_coupling(int i, int j, const Rational& v);

  Rational energy(std::uint64_t assignment) const;
  Rational energy(const std::vector<int>& spins) const;
  Rational binary_energy(std::uint64_t assignment) const { return scale * energy(assignment) + offset; }
  Rational max_abs_coefficient() const;

  bool operator==(const IsingModel& o) const = default;
  std::string to_string() const;
};

/// Exact spin form of a quadratic polynomial (offset = constant term, scale 1).
IsingModel spin_form(const Polynomial& p);

/// Divides every coefficient by the largest magnitude and folds the divisor into scale.
IsingModel normalize(const IsingModel& m);

/// spin_form followed by normalize.
IsingModel to_ising(const Polynomial& p);

/// Binary polynomial equal to scale * E(s) + offset.
Polynomial to_polynomial(const IsingModel& m);

std::vector<int> spins_from_mask(std::uint64_t assignment, int n);
std::uint64_t mask_from_spins(const std::vector<int>& spins);

/// Exact Ising energies E(s) of every assignment as integers over a common denominator.
struct EnergyTable {
  std::vector<std::int64_t> values;
  std::int64_t denominator = 1;
  Rational at(std::uint64_t a) const { return Rational(values[a], denominator); }
};

inline constexpr int kMaxExhaustiveSpins = 24;

EnergyTable energy_table(const IsingModel& m);

/// Double-precision copy for the numerical paths.
struct DenseIsing {
  int n = 0;
  std::vector<double> h;
  std::vector<std::vector<std::pair<int, double>>> neighbours;
  std::vector<std::tuple<int, int, double>> couplings;

  explicit DenseIsing(const IsingModel& m);
  double energy(const std::vector<int>& spins) const;
  double energy(std::uint64_t assignment) const;
};

}  // namespace qafold::ising
