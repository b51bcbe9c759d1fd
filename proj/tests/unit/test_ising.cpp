#include <doctest.h>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/ising.hpp"

using namespace qafold;
using namespace qafold::ising;

namespace {

const char* kExp6Spin =
    "10 + 13/4 s1 + 3/4 s2 + 7/4 s3 + 1/4 s4 - 2s5 - 2s6 + 3/2 s1s2 + 1/4 s1s3 - 1/2 s2s3 - 1/2 s1s4 - 2s2s4 "
    "+ s3s4 - 3s1s5 - 3s2s5 + 5/4 s4s5 + 5/4 s2s6 - 2s3s6 - 2s4s6 - 1/4 s5s6";

}  // namespace

TEST_CASE("spin form of the exp6 quadratic") {
  auto m = spin_form(fixtures::load_polynomial("exp6-quadratic"));
  CHECK(m == fixtures::parse_ising(kExp6Spin, 6));
  CHECK(m.offset == Rational(10));
  CHECK(m.scale == Rational(1));
}

TEST_CASE("normalization divides by the largest coefficient") {
  auto m = normalize(spin_form(fixtures::load_polynomial("exp6-quadratic")));
  CHECK(m == fixtures::load_ising("exp6-ising"));
  CHECK(m.scale == Rational(13, 4));
  CHECK(m.max_abs_coefficient() == Rational(1));
  CHECK(to_ising(fixtures::load_polynomial("exp6-quadratic")) == m);
}

TEST_CASE("exp3 spin coefficients") {
  auto p = compiler::Polynomial::parse("-1 - 4q3 + 9q1q3 + 36q4 - 18q2q4 - 18q3q4 + 9q2q3 - 16q1q4", 4);
  CHECK(spin_form(p) == fixtures::load_ising("exp3-ising"));
}

TEST_CASE("binary energy equals the polynomial on every assignment") {
  auto p = fixtures::load_polynomial("exp6-quadratic");
  auto m = to_ising(p);
  for (std::uint64_t a = 0; a < 64; ++a) CHECK(m.binary_energy(a) == p.evaluate(a));
  CHECK(to_polynomial(m) == p);
}

TEST_CASE("energy table agrees with direct evaluation") {
  auto m = fixtures::load_ising("exp6-embedded");
  auto t = energy_table(m);
  DenseIsing d(m);
  for (std::uint64_t a = 0; a < 256; ++a) {
    CHECK(t.at(a) == m.energy(a));
    CHECK(d.energy(a) == doctest::Approx(to_double(m.energy(a))));
  }
}

TEST_CASE("spins and masks") {
  auto s = spins_from_mask(0b101, 3);
  CHECK(s == std::vector<int>{-1, 1, -1});
  CHECK(mask_from_spins(s) == 0b101);
}

TEST_CASE("coupling validation") {
  IsingModel m(3);
  CHECK_THROWS_AS(m.add_coupling(1, 1, Rational(1)), Error);
  CHECK_THROWS_AS(m.add_coupling(0, 3, Rational(1)), Error);
  m.add_coupling(2, 0, Rational(1));
  CHECK(m.coupling(0, 2) == Rational(1));
  m.add_coupling(0, 2, Rational(-1));
  CHECK(m.J.empty());
}

TEST_CASE("energy table capacity") {
  IsingModel m(kMaxExhaustiveSpins + 1);
  try {
    energy_table(m);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
}
