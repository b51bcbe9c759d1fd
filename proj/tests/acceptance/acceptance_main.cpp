// One line per acceptance criterion: PASS/FAIL, elapsed time against its budget, details.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qafold/dynamics.hpp"
#include "qafold/embedding.hpp"
#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/lattice.hpp"
#include "qafold/quadratize.hpp"
#include "qafold/solvers.hpp"
#include "qafold/units.hpp"

using namespace qafold;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

const hardware::HardwareGraph& cell() {
  static const auto g = hardware::build_chimera(1, 1, 4);
  return g;
}

embedding::EmbeddedIsing exp3_embedded() {
  return embedding::apply_embedding(fixtures::load_ising("exp3-ising"), fixtures::load_embedding("exp3-embedding"), cell());
}

std::uint64_t unique_ground(const ising::IsingModel& m) {
  auto g = solvers::exhaustive_ground_states(m);
  if (g.samples.size() != 1) throw Error(ErrorKind::stage, "ground state is degenerate");
  return g.samples[0].assignment;
}

Outcome exp6_chain() {
  compiler::QuadratizationPlan plan;
  plan.collapses = {{1, 2, Rational(6)}, {3, 4, Rational(4)}};
  auto q = compiler::quadratize(fixtures::load_polynomial("exp6"), plan);
  bool quad = q.quadratic == fixtures::load_polynomial("exp6-quadratic");
  auto logical = ising::to_ising(q.quadratic);
  bool spins = logical == fixtures::load_ising("exp6-ising") && logical.scale == Rational(13, 4);
  embedding::ApplyOptions ao;
  ao.gamma = Rational(1);
  auto emb = embedding::apply_embedding(logical, fixtures::load_embedding("exp6-embedding"), cell(), ao);
  bool hw = emb.model == fixtures::load_ising("exp6-embedded");
  for (auto [a, b] : emb.chain_couplers) hw = hw && emb.model.coupling(a, b) == Rational(-1);
  std::ostringstream d;
  d << "quadratic " << (quad ? "match" : "MISMATCH") << ", ising " << (spins ? "match" : "MISMATCH")
    << " (scale " << logical.scale << "), embedded " << (hw ? "match" : "MISMATCH") << " (" << emb.qubits.size()
    << " qubits)";
  return {quad && spins && hw, d.str()};
}

Outcome exp3_chain() {
  compiler::QuadratizationPlan plan;
  plan.collapses = {{2, 3, std::nullopt}};
  auto q = compiler::quadratize(fixtures::load_polynomial("exp3"), plan);
  auto m = ising::spin_form(q.quadratic);
  auto want = fixtures::load_ising("exp3-ising");
  int nonzero = static_cast<int>(m.J.size());
  for (const auto& h : m.h) nonzero += h != 0;
  bool delta = q.ancillas.size() == 1 && q.ancillas[0].delta == Rational(9);
  bool coeffs = m.h == want.h && m.J == want.J;
  std::ostringstream d;
  d << "delta " << (q.ancillas.empty() ? Rational(0) : q.ancillas[0].delta) << ", " << nonzero
    << " spin coefficients " << (coeffs ? "match" : "MISMATCH");
  return {delta && coeffs && nonzero == 9, d.str()};
}

Outcome divide_and_conquer() {
  bool ok = true;
  std::ostringstream d;
  for (const auto& r : fixtures::fixing_recipes()) {
    if (r.from != "exp4") continue;
    auto fixed = compiler::fix_variables(fixtures::load_polynomial("exp4"), r.bindings, true);
    bool same = fixed == fixtures::load_polynomial(r.to);
    ok = ok && same;
    d << "exp4 -> " << r.to << ' ' << (same ? "match" : "MISMATCH") << "; ";
  }
  return {ok, d.str()};
}

Outcome hpph_oracle() {
  auto inst = fixtures::load_instance("hpph-instance");
  auto poly = fixtures::load_polynomial("hpph");
  auto rows = lattice::enumerate_landscape(inst);
  int saw = 0, bad = 0, ground = 0;
  bool ok = poly.arity() == static_cast<int>(inst.arity());
  for (const auto& r : rows) {
    Rational p = poly.evaluate(r.assignment);
    if (r.valid) {
      ++saw;
      ok = ok && p == r.energy;
      ground += r.energy == Rational(-1);
    } else {
      ++bad;
      ok = ok && p > 0 && r.energy > 0;
    }
  }
  std::ostringstream d;
  d << saw << " self-avoiding, " << bad << " overlapping, " << ground << " fold(s) at E = -1";
  return {ok && ground == 1, d.str()};
}

Outcome quadratization_spectrum() {
  bool ok = true;
  std::ostringstream d;
  for (const char* name : {"exp1", "exp2", "exp3", "exp4", "exp5", "exp6"}) {
    auto p = fixtures::load_polynomial(name);
    auto q = compiler::quadratize(p, compiler::QuadratizationPlan::automatic());
    auto c = compiler::check_quadratization(p, q);
    ok = ok && c.identity_holds && c.violations_positive;
    d << name << ": " << q.ancillas.size() << " anc, min violation " << c.min_violation_energy << "; ";
  }
  // Chain-broken states of the two printed embeddings.
  auto e6 = embedding::verify_embedding(fixtures::load_ising("exp6-ising"), fixtures::load_embedding("exp6-embedding"), cell());
  auto e3 = embedding::verify_embedding(fixtures::load_ising("exp3-ising"), fixtures::load_embedding("exp3-embedding"), cell());
  for (auto* v : {&e6, &e3}) ok = ok && v->ok() && v->min_broken_energy && *v->min_broken_energy > 0;
  d << "broken chains min E: exp6 " << e6.min_broken_energy.value_or(Rational(0)) << ", exp3 "
    << e3.min_broken_energy.value_or(Rational(0));
  return {ok, d.str()};
}

Outcome embedding_spectrum() {
  struct Case {
    std::string name;
    ising::IsingModel logical;
    std::optional<embedding::Embedding> chains;
  };
  std::vector<Case> cases = {
      {"exp6", fixtures::load_ising("exp6-ising"), fixtures::load_embedding("exp6-embedding")},
      {"exp3", fixtures::load_ising("exp3-ising"), fixtures::load_embedding("exp3-embedding")},
  };
  for (const char* name : {"exp1", "exp2", "exp4", "exp5", "hpph"}) {
    auto q = compiler::quadratize(fixtures::load_polynomial(name), compiler::QuadratizationPlan::automatic());
    cases.push_back({name, ising::to_ising(q.quadratic), std::nullopt});
  }
  const auto grid = hardware::build_chimera(4, 4, 4);
  bool ok = true;
  int checked = 0;
  std::ostringstream d;
  for (const auto& c : cases) {
    const auto& g = c.chains ? cell() : grid;
    embedding::Embedding e;
    try {
      e = c.chains ? *c.chains : embedding::embed(c.logical, g, {.seed = 1});
    } catch (const Error& err) {
      d << c.name << ": no embedding; ";
      continue;
    }
    if (e.qubit_count() > embedding::kSpectrumCheckQubits) {
      d << c.name << ": " << e.qubit_count() << " qubits, skipped; ";
      continue;
    }
    auto v = embedding::verify_embedding(c.logical, e, g);
    bool good = v.ok() && v.spectrum_checked && v.minimizers_match;
    ok = ok && good;
    ++checked;
    d << c.name << ": " << e.qubit_count() << " qubits " << (good ? "ok" : "FAIL") << "; ";
  }
  d << checked << " checked";
  return {ok && checked >= 2, d.str()};
}

Outcome closed_limits() {
  auto e = exp3_embedded();
  auto ground = unique_ground(e.model);
  auto slow = dynamics::evolve_closed(e.model, dynamics::AnnealSchedule::linear(dynamics::kDefaultA0, dynamics::kDefaultB0, 0.01));
  auto fast = dynamics::evolve_closed(e.model, dynamics::AnnealSchedule::linear(dynamics::kDefaultA0, dynamics::kDefaultB0, 1e-7));
  double p0 = slow.final_probabilities[ground];
  double uniform = 1.0 / fast.final_probabilities.size();
  double dev = 0;
  for (double p : fast.final_probabilities) dev = std::max(dev, std::abs(p - uniform));
  std::ostringstream d;
  d << e.qubits.size() << " qubits; t_run 0.01 us P0 = " << p0 << "; t_run 1e-7 us max |p - 1/" << fast.final_probabilities.size()
    << "| = " << dev;
  return {p0 > 0.99 && dev < 0.01, d.str()};
}

Outcome open_properties() {
  using namespace dynamics;
  std::ostringstream d;
  bool ok = true;

  // Frozen tau: the master equation relaxes to the Gibbs state of H(tau).
  auto m6 = fixtures::load_ising("exp6-embedded");
  auto sched = AnnealSchedule::linear(kDefaultA0, kDefaultB0, 1.0);
  BathParams bath;
  double gibbs_err = 0;
  for (double tau : {0.3, 0.5, 0.8}) {
    Eigen::VectorXd E;
    rate_matrix(m6, sched, bath, tau, 24, &E);
    auto w = gibbs_weights(E, bath.T_mK);
    OpenOptions o;
    o.levels = 24;
    o.steps = 400;
    o.record_levels = 24;
    o.frozen_tau = tau;
    auto r = evolve_open(m6, sched, bath, o);
    for (int k = 0; k < 24; ++k) gibbs_err = std::max(gibbs_err, std::abs(r.populations.back()[k] - w[k]));
  }
  ok = ok && gibbs_err < 1e-6;
  d << "frozen |P - Gibbs| = " << gibbs_err;

  // Zero coupling reproduces the closed evolution.
  auto e3 = exp3_embedded();
  auto fast = AnnealSchedule::linear(kDefaultA0, kDefaultB0, 0.001);
  BathParams off;
  off.eta = 0;
  off.A_1f = 0;
  OpenOptions oz;
  oz.levels = 32;
  oz.steps = 4000;
  auto open = evolve_open(e3.model, fast, off, oz);
  auto closed = evolve_closed(e3.model, fast);
  double diff = 0;
  for (std::size_t a = 0; a < closed.final_probabilities.size(); ++a)
    diff = std::max(diff, std::abs(open.final_probabilities[a] - closed.final_probabilities[a]));
  ok = ok && diff < 1e-6;
  d << "; eta=0 vs closed " << diff;

  // Thermal dip around the minimum gap of the 8-qubit model.
  std::vector<double> grid;
  for (int k = 0; k <= 200; ++k) grid.push_back(k / 200.0);
  auto sp = instantaneous_spectrum(m6, sched, 2, grid);
  OpenOptions os;
  os.levels = 24;
  os.steps = 1000;
  auto r = evolve_open(m6, sched, bath, os);
  std::size_t kmin = 0;
  for (std::size_t k = 0; k < r.tau.size(); ++k)
    if (r.populations[k][0] < r.populations[kmin][0]) kmin = k;
  double dip = r.populations[kmin][0];
  double final_p0 = r.final_probabilities[unique_ground(m6)];
  bool shape = dip < final_p0 && final_p0 < 1 && std::abs(r.tau[kmin] - sp.tau_star) < 0.1;
  ok = ok && shape;
  d << "; kT " << units::mk_to_ghz(bath.T_mK) << " GHz, min gap " << sp.min_gap << " GHz at tau " << sp.tau_star
    << ", dip P0 " << dip << " at tau " << r.tau[kmin] << ", final P0 " << final_p0;
  return {ok, d.str()};
}

Outcome sa_vs_exhaustive() {
  auto m = fixtures::load_ising("exp6-embedded");
  auto ground = solvers::exhaustive_ground_states(m);
  std::set<std::uint64_t> minimizers;
  for (const auto& s : ground.samples) minimizers.insert(s.assignment);
  solvers::AnnealOptions o;
  o.reads = 1000;
  o.seed = 2024;
  auto sa = solvers::simulated_anneal(m, o);
  std::size_t hits = 0;
  for (const auto& s : sa.samples)
    if (minimizers.count(s.assignment)) hits += s.count;
  double frac = static_cast<double>(hits) / sa.total_reads();
  std::ostringstream d;
  d << hits << "/" << sa.total_reads() << " reads at the ground state (" << frac * 100 << "%)";
  return {frac >= 0.99, d.str()};
}

Outcome psvkma_count() {
  const auto t = lattice::TurnTemplate::standard(6, false);
  auto n = lattice::count_self_avoiding(t);
  auto shapes = lattice::count_distinct_shapes(t, false);
  // Two-branch split of the same space: q1 = 1, q2 = 0 and q1 = 0.
  auto split = lattice::count_self_avoiding(t.with_fixed({{1, 1}, {2, 0}})) +
               lattice::count_self_avoiding(t.with_fixed({{1, 0}}));
  std::ostringstream d;
  d << "self-avoiding reduced-space encodings " << n << ", distinct shapes " << shapes
    << ", two-branch split space " << split << " vs quoted 40: "
    << (n == 40 ? "agreement" : "disagreement for the full reduced space")
    << (split == 40 ? ", agreement for the split space" : "");
  return {true, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exp6 bit-exact chain", 1, exp6_chain},
      {2, "exp3 chain", 1, exp3_chain},
      {3, "divide-and-conquer consistency", 1, divide_and_conquer},
      {4, "HPPH oracle/fixture agreement", 1, hpph_oracle},
      {5, "quadratization spectrum", 5, quadratization_spectrum},
      {6, "embedding spectrum preservation", 10, embedding_spectrum},
      {7, "closed-system adiabatic and sudden limits", 30, closed_limits},
      {8, "open-system properties", 300, open_properties},
      {9, "SA vs enumeration", 30, sa_vs_exhaustive},
      {10, "PSVKMA landscape count", 1, psvkma_count},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && dt < c.budget_s;
    failed += !pass;
    std::printf("%s  %2d %s [%.3f s / %.0f s] %s\n", pass ? "PASS" : "FAIL", c.id, c.name, dt, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
