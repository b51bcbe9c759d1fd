#include "qafold/ising.hpp"

#include <bit>
#include <sstream>

#include "qafold/errors.hpp"

namespace qafold::ising {

namespace {

std::pair<int, int> key(int i, int j) { return i < j ? std::pair{i, j} : std::pair{j, i}; }

int spin(std::uint64_t a, int i) { return (a >> i) & 1u ? -1 : 1; }

}  // namespace

Rational IsingModel::coupling(int i, int j) const {
  auto it = J.find(key(i, j));
  return it == J.end() ? Rational(0) : it->second;
}

void IsingModel::add_coupling(int i, int j, const Rational& v) {
  if (i == j) throw Error(ErrorKind::validation, "Ising coupling on the diagonal");
  if (i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorKind::validation, "Ising coupling index out of range");
  auto k = key(i, j);
  Rational total = coupling(i, j) + v;
  if (total == 0)
    J.erase(k);
  else
    J[k] = total;
}

Rational IsingModel::energy(std::uint64_t assignment) const {
  Rational e(0);
  for (int i = 0; i < n; ++i)
    if (h[i] != 0) e += h[i] * spin(assignment, i);
  for (const auto& [ij, v] : J) e += v * (spin(assignment, ij.first) * spin(assignment, ij.second));
  return e;
}

Rational IsingModel::energy(const std::vector<int>& spins) const { return energy(mask_from_spins(spins)); }

Rational IsingModel::max_abs_coefficient() const {
  Rational m(0);
  for (const auto& v : h) m = std::max(m, abs(v));
  for (const auto& [ij, v] : J) m = std::max(m, abs(v));
  return m;
}

std::string IsingModel::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& vars) {
    if (c == 0) return;
    Rational a = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (a != 1 || vars.empty()) os << qafold::to_string(a) << (vars.empty() ? "" : " ");
    os << vars;
  };
  for (int i = 0; i < n; ++i) emit(h[i], "s" + std::to_string(i + 1));
  for (const auto& [ij, v] : J) emit(v, "s" + std::to_string(ij.first + 1) + " s" + std::to_string(ij.second + 1));
  if (first) os << "0";
  return os.str();
}

IsingModel spin_form(const Polynomial& p) {
  if (p.degree() > 2) throw Error(ErrorKind::validation, "to_ising needs a polynomial of degree <= 2");
  IsingModel m(p.arity());
  for (const auto& [mono, c] : p.terms()) {
    switch (mono.size()) {
      case 0:
        m.offset += c;
        break;
      case 1:  // c q = c/2 - c/2 s
        m.offset += c / 2;
        m.h[mono[0] - 1] -= c / 2;
        break;
      case 2:  // c q_i q_j = c/4 (1 - s_i - s_j + s_i s_j)
        m.offset += c / 4;
        m.h[mono[0] - 1] -= c / 4;
        m.h[mono[1] - 1] -= c / 4;
        m.add_coupling(mono[0] - 1, mono[1] - 1, c / 4);
        break;
    }
  }
  return m;
}

IsingModel normalize(const IsingModel& m) {
  IsingModel out = m;
  Rational s = m.max_abs_coefficient();
  if (s == 0 || s == 1) return out;
  for (auto& v : out.h) v /= s;
  for (auto& [ij, v] : out.J) v /= s;
  out.scale = m.scale * s;
  return out;
}

IsingModel to_ising(const Polynomial& p) { return normalize(spin_form(p)); }

Polynomial to_polynomial(const IsingModel& m) {
  Polynomial p(m.n);
  p.add_term({}, m.offset);
  for (int i = 0; i < m.n; ++i) {
    // s = 1 - 2q
    p.add_term({}, m.scale * m.h[i]);
    p.add_term({i + 1}, m.scale * m.h[i] * -2);
  }
  for (const auto& [ij, v] : m.J) {
    Rational c = m.scale * v;
    p.add_term({}, c);
    p.add_term({ij.first + 1}, c * -2);
    p.add_term({ij.second + 1}, c * -2);
    p.add_term({ij.first + 1, ij.second + 1}, c * 4);
  }
  return p;
}

std::vector<int> spins_from_mask(std::uint64_t assignment, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = spin(assignment, i);
  return s;
}

std::uint64_t mask_from_spins(const std::vector<int>& spins) {
  std::uint64_t a = 0;
  for (std::size_t i = 0; i < spins.size(); ++i)
    if (spins[i] < 0) a |= std::uint64_t{1} << i;
  return a;
}

EnergyTable energy_table(const IsingModel& m) {
  if (m.n > kMaxExhaustiveSpins)
    throw Error(ErrorKind::capacity, "exhaustive enumeration limited to " + std::to_string(kMaxExhaustiveSpins) +
                                         " spins, got " + std::to_string(m.n));
  std::int64_t den = 1;
  for (const auto& v : m.h) den = lcm_denominator(den, v);
  for (const auto& [ij, v] : m.J) den = lcm_denominator(den, v);
  std::vector<std::int64_t> h(m.n);
  for (int i = 0; i < m.n; ++i) h[i] = (m.h[i] * den).numerator();
  std::vector<std::vector<std::pair<int, std::int64_t>>> nb(m.n);
  for (const auto& [ij, v] : m.J) {
    std::int64_t c = (v * den).numerator();
    nb[ij.first].push_back({ij.second, c});
    nb[ij.second].push_back({ij.first, c});
  }

  EnergyTable t;
  t.denominator = den;
  const std::uint64_t count = std::uint64_t{1} << m.n;
  t.values.resize(count);
  // Gray-code walk: one spin flip per step.
  std::vector<int> s(m.n, 1);
  std::int64_t e = 0;
  for (int i = 0; i < m.n; ++i) e += h[i];
  for (const auto& [ij, v] : m.J) e += (v * den).numerator();
  std::uint64_t mask = 0;
  t.values[0] = e;
  for (std::uint64_t step = 1; step < count; ++step) {
    int i = std::countr_zero(step);
    std::int64_t local = h[i];
    for (const auto& [j, c] : nb[i]) local += c * s[j];
    e -= 2 * s[i] * local;
    s[i] = -s[i];
    mask ^= std::uint64_t{1} << i;
    t.values[mask] = e;
  }
  return t;
}

DenseIsing::DenseIsing(const IsingModel& m) : n(m.n), h(m.n), neighbours(m.n) {
  for (int i = 0; i < n; ++i) h[i] = to_double(m.h[i]);
  for (const auto& [ij, v] : m.J) {
    double c = to_double(v);
    neighbours[ij.first].push_back({ij.second, c});
    neighbours[ij.second].push_back({ij.first, c});
    couplings.emplace_back(ij.first, ij.second, c);
  }
}

double DenseIsing::energy(const std::vector<int>& spins) const {
  double e = 0;
  for (int i = 0; i < n; ++i) e += h[i] * spins[i];
  for (const auto& [i, j, c] : couplings) e += c * spins[i] * spins[j];
  return e;
}

double DenseIsing::energy(std::uint64_t assignment) const { return energy(spins_from_mask(assignment, n)); }

}  // namespace qafold::ising
