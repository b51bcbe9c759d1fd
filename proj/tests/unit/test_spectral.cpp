#include <doctest.h>

#include <cmath>

#include "qafold/errors.hpp"
#include "qafold/spectral.hpp"
#include "qafold/units.hpp"

using namespace qafold;
using namespace qafold::dynamics;

TEST_CASE("20 mK in GHz") { CHECK(units::mk_to_ghz(20) == doctest::Approx(0.4167323824665515).epsilon(1e-12)); }

TEST_CASE("ohmic rate at 1 GHz") {
  BathParams b;
  b.A_1f = 0;
  CHECK(transition_rate(1.0, 1.0, b, 1e-6) == doctest::Approx(0.6252708835997995).epsilon(1e-10));
}

TEST_CASE("1/f rate at 1 GHz") {
  BathParams b;
  b.eta = 0;
  CHECK(transition_rate(1.0, 1.0, b, 1e-6) == doctest::Approx(1.4534568254367767e-09).epsilon(1e-10));
}

TEST_CASE("rates obey detailed balance") {
  BathParams b;
  const double kt = units::mk_to_ghz(b.T_mK);
  for (double d : {0.05, 0.4, 1.3, 4.0}) {
    double down = transition_rate(0.3, d, b, 1e-6);
    double up = transition_rate(0.3, -d, b, 1e-6);
    CHECK(down / up == doctest::Approx(std::exp(d / kt)).epsilon(1e-10));
  }
}

TEST_CASE("vanishing matrix elements give zero rates") {
  BathParams b;
  CHECK(transition_rate(0.0, 1.0, b, 1e-6) == 0.0);
  CHECK(transition_rate(1.0, 0.0, b, 1e-6) == 0.0);
}

TEST_CASE("persistent current interpolation") {
  BathParams b;
  CHECK(b.persistent_current(0.3) == doctest::Approx(1e-6));
  b.Ip_of_tau = {{0.0, 0.5}, {1.0, 1.5}};
  CHECK(b.persistent_current(0.5) == doctest::Approx(1e-6));
  CHECK(b.persistent_current(-1) == doctest::Approx(0.5e-6));
  CHECK(b.persistent_current(2) == doctest::Approx(1.5e-6));
}

TEST_CASE("bath validation") {
  BathParams b;
  b.T_mK = 0;
  CHECK_THROWS_AS(b.validate(), Error);
  b = {};
  b.eta = -1;
  CHECK_THROWS_AS(b.validate(), Error);
  b = {};
  b.Ip_of_tau = {{0.5, 1}, {0.2, 1}};
  CHECK_THROWS_AS(b.validate(), Error);
}
