#include <doctest.h>

#include <cmath>

#include "qafold/dynamics.hpp"
#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"

using namespace qafold;
using namespace qafold::dynamics;

namespace {

ising::IsingModel single_spin() {
  ising::IsingModel m(1);
  m.h[0] = Rational(1);
  return m;
}

ising::IsingModel pair_model() {
  ising::IsingModel m(2);
  m.h = {Rational(1, 2), Rational(-1, 4)};
  m.add_coupling(0, 1, Rational(-1));
  return m;
}

}  // namespace

TEST_CASE("schedule validation and parsing") {
  auto s = AnnealSchedule::parse_csv("tau,A_GHz,B_GHz\n0,5,0\n0.5,2,2\n1,0,5\n", 2.0);
  CHECK(s.a(0.25) == doctest::Approx(3.5));
  CHECK(s.b(0.75) == doctest::Approx(3.5));
  CHECK(s.t_run_ns() == doctest::Approx(2000));
  CHECK_THROWS_AS(AnnealSchedule::parse_csv("0,5,0\n0.5,6,1\n1,0,5\n", 1), Error);
  CHECK_THROWS_AS(AnnealSchedule::parse_csv("0,5,0\n0.9,0,5\n", 1), Error);
  CHECK_THROWS_AS(AnnealSchedule::parse_csv("0,5,0\nx,0,5\n", 1), Error);
  CHECK_THROWS_AS(AnnealSchedule::linear(5, 5, -1).validate(), Error);
}

TEST_CASE("hamiltonian endpoints") {
  auto m = pair_model();
  auto H = build_hamiltonian(m, 0.0, 1.0);
  for (std::uint64_t a = 0; a < 4; ++a) CHECK(H(a, a) == doctest::Approx(to_double(m.energy(a))));
  auto D = build_hamiltonian(m, 1.0, 0.0);
  CHECK((D - D.transpose()).norm() == 0.0);
  CHECK(D(0, 1) == -1.0);
  CHECK(D(0, 3) == 0.0);
}

TEST_CASE("dense paths refuse large models") {
  ising::IsingModel big(kMaxDenseSpins + 1);
  try {
    build_hamiltonian(big, 1, 1);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
}

TEST_CASE("single-spin gap is analytic") {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  auto r = instantaneous_spectrum(single_spin(), AnnealSchedule::linear(5, 5, 1), 2, grid);
  CHECK(r.min_gap == doctest::Approx(2 * std::sqrt(12.5)).epsilon(1e-8));
  CHECK(r.tau_star == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.gaps[0][1] == doctest::Approx(10));
}

TEST_CASE("closed evolution limits") {
  auto m = single_spin();
  auto slow = evolve_closed(m, AnnealSchedule::linear(5, 5, 0.01));
  CHECK(slow.final_probabilities[1] > 0.999);
  CHECK(slow.norm_drift < 1e-8);
  auto fast = evolve_closed(m, AnnealSchedule::linear(5, 5, 1e-8));
  CHECK(fast.final_probabilities[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("adiabatic-frame and Magnus integrators agree") {
  auto m = pair_model();
  auto s = AnnealSchedule::linear(5, 5, 0.002);
  auto a = evolve_closed(m, s);
  ClosedOptions o;
  o.method = ClosedMethod::adiabatic_frame;
  o.frame_steps = 4000;
  auto b = evolve_closed(m, s, o);
  for (std::size_t k = 0; k < 4; ++k) CHECK(a.final_probabilities[k] == doctest::Approx(b.final_probabilities[k]).epsilon(1e-5));
}

TEST_CASE("open evolution without coupling follows the closed one") {
  auto m = pair_model();
  auto s = AnnealSchedule::linear(5, 5, 0.002);
  BathParams off;
  off.eta = 0;
  off.A_1f = 0;
  OpenOptions o;
  o.levels = 4;
  o.steps = 4000;
  auto open = evolve_open(m, s, off, o);
  auto closed = evolve_closed(m, s);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(open.final_probabilities[k] - closed.final_probabilities[k]) < 1e-6);
}

TEST_CASE("frozen evolution relaxes to the Gibbs state") {
  auto m = pair_model();
  auto s = AnnealSchedule::linear(2, 2, 2);
  BathParams bath;
  Eigen::VectorXd E;
  auto G = rate_matrix(m, s, bath, 0.6, 4, &E);
  for (int c = 0; c < 4; ++c) CHECK(std::abs(G.col(c).sum()) < 1e-12);
  auto w = gibbs_weights(E, bath.T_mK);
  CHECK((stationary_distribution(G) - w).cwiseAbs().maxCoeff() < 1e-10);
  OpenOptions o;
  o.levels = 4;
  o.steps = 400;
  o.record_levels = 4;
  o.frozen_tau = 0.6;
  auto r = evolve_open(m, s, bath, o);
  for (int k = 0; k < 4; ++k) CHECK(r.populations.back()[k] == doctest::Approx(w[k]).epsilon(1e-6));
  CHECK(r.norm_drift < 1e-10);
}

TEST_CASE("level truncation is validated") {
  OpenOptions o;
  o.levels = 9;
  CHECK_THROWS_AS(evolve_open(pair_model(), AnnealSchedule::linear(5, 5, 1), BathParams{}, o), Error);
}
