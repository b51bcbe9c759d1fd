#include <doctest.h>

#include <cmath>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/solvers.hpp"

using namespace qafold;
using namespace qafold::solvers;

TEST_CASE("exhaustive ground state of exp6") {
  auto m = fixtures::load_ising("exp6-ising");
  auto g = exhaustive_ground_states(m);
  REQUIRE(g.samples.size() == 1);
  CHECK(m.binary_energy(g.samples[0].assignment) == Rational(-1));
  // q1..q4 = 1,1,1,0 with consistent ancillas q5 = q1q2, q6 = q3q4.
  CHECK(g.samples[0].assignment == 0b010111);
}

TEST_CASE("annealing finds the exp6 ground state") {
  auto m = fixtures::load_ising("exp6-embedded");
  AnnealOptions o;
  o.reads = 50;
  o.seed = 3;
  auto s = simulated_anneal(m, o);
  CHECK(s.total_reads() == 50);
  auto ground = exhaustive_ground_states(m).samples[0].energy;
  CHECK(s.count_at(ground) >= 45);
  CHECK(*s.min_energy() == ground);
}

TEST_CASE("annealing is reproducible per seed") {
  auto m = fixtures::load_ising("exp3-ising");
  AnnealOptions o;
  o.reads = 20;
  o.schedule.sweeps = 50;
  o.seed = 11;
  auto a = simulated_anneal(m, o);
  auto b = simulated_anneal(m, o);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].assignment == b.samples[i].assignment);
    CHECK(a.samples[i].count == b.samples[i].count);
  }
}

TEST_CASE("schedule validation") {
  BetaSchedule s{1.0, 0.5, 10};
  CHECK_THROWS_AS(s.validate(), Error);
  BetaSchedule g{0.1, 10, 3};
  auto b = g.betas();
  REQUIRE(b.size() == 3);
  CHECK(b[1] == doctest::Approx(1.0));
}

TEST_CASE("metropolis samples the Gibbs distribution") {
  auto m = fixtures::load_ising("exp3-ising");
  const double beta = 0.7;
  auto hist = metropolis_histogram(m, beta, 200000, 5);
  auto p = gibbs_distribution(m, beta);
  double total = 0;
  for (auto c : hist) total += static_cast<double>(c);
  for (std::size_t a = 0; a < p.size(); ++a) CHECK(std::abs(hist[a] / total - p[a]) < 0.01);
}

TEST_CASE("landscape report levels") {
  auto t = lattice::TurnTemplate::standard(4, false);
  auto l = landscape_report(fixtures::load_polynomial("hpph"), &t);
  REQUIRE(l.rows.size() == 8);
  CHECK(l.rows[0].energy == Rational(-1));
  CHECK(l.rows[0].valid.value());
  CHECK(l.levels.front() == std::pair<Rational, std::size_t>{Rational(-1), 1});
  std::size_t invalid = 0;
  for (const auto& r : l.rows)
    if (!*r.valid) {
      ++invalid;
      CHECK(r.energy > Rational(0));
    }
  CHECK(invalid == 2);
}
