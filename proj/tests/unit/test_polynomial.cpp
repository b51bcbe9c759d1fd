#include <doctest.h>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/pipeline.hpp"
#include "qafold/polynomial.hpp"

using namespace qafold;
using namespace qafold::compiler;

TEST_CASE("parse and print") {
  auto p = Polynomial::parse("4 - 3q1 + 4q2 - 4q1q2 + 13/4 q1q3");
  CHECK(p.arity() == 3);
  CHECK(p.coefficient({1, 3}) == Rational(13, 4));
  CHECK(p.to_string() == "4 - 3q1 + 4q2 - 4q1q2 + 13/4 q1q3");
  CHECK(Polynomial::parse(p.to_string()) == p);
  CHECK(Polynomial::parse("q2q2q1") == Polynomial::parse("q1q2"));
  CHECK(Polynomial::parse("q_1 q_2") == Polynomial::parse("q1q2"));
  CHECK_THROWS_AS(Polynomial::parse("q5", 3), Error);
  CHECK_THROWS_AS(Polynomial::parse("3 q1 q"), Error);
  CHECK_THROWS_AS(Polynomial::parse("q1 q2 +"), Error);
}

TEST_CASE("cancelling terms disappear") {
  auto p = Polynomial::parse("q1q2 + 2 - q2q1");
  CHECK(p.size() == 1);
  CHECK(p.degree() == 0);
}

TEST_CASE("interpolation of the HPPH oracle gives the printed polynomial") {
  auto inst = fixtures::load_instance("hpph-instance");
  CHECK(pipeline::compile_instance(inst) == fixtures::load_polynomial("hpph"));
}

TEST_CASE("interpolation with the chaperone gives the printed exp6 quartic") {
  auto inst = fixtures::load_instance("hpph-chaperone-instance");
  auto p = pipeline::compile_instance(inst);
  CHECK(p == fixtures::load_polynomial("exp6"));
  CHECK(p == fixtures::load_polynomial("hpph-vacuo4") + fixtures::load_polynomial("chaperone"));
}

TEST_CASE("interpolation recovers a random polynomial") {
  auto p = Polynomial::parse("1/3 - q1 + 7q2q4 - 5/2 q1q3q4 + q1q2q3q4", 4);
  auto back = interpolate_polynomial([&](std::uint64_t a) { return p.evaluate(a); }, 4);
  CHECK(back == p);
}

TEST_CASE("value table matches evaluate") {
  auto p = fixtures::load_polynomial("exp4");
  auto t = value_table(p);
  for (std::uint64_t a = 0; a < 64; ++a) CHECK(t.at(a) == p.evaluate(a));
}

TEST_CASE("fixing with and without relabel") {
  auto p = Polynomial::parse("q1 + 2q2q3 - q1q3");
  auto r = fix_variables(p, {{1, 1}}, true);
  CHECK(r == Polynomial::parse("1 + 2q1q2 - q2", 2));
  auto k = fix_variables(p, {{1, 1}}, false);
  CHECK(k.arity() == 3);
  CHECK(k.coefficient({2, 3}) == Rational(2));
  CHECK_THROWS_AS(fix_variables(p, {{4, 0}}, true), Error);
  CHECK_THROWS_AS(fix_variables(p, {{1, 2}}, true), Error);
}

TEST_CASE("divide-and-conquer recipes") {
  for (const auto& r : fixtures::fixing_recipes()) {
    CAPTURE(r.to);
    CHECK(fix_variables(fixtures::load_polynomial(r.from), r.bindings, true) == fixtures::load_polynomial(r.to));
  }
}

TEST_CASE("verbatim PSVKMA does not satisfy the recipes") {
  auto v = fixtures::load_polynomial("psvkma-verbatim");
  CHECK_FALSE(fix_variables(v, {{1, 0}}, true) == fixtures::load_polynomial("exp4"));
  CHECK(fixtures::fixture_info("psvkma").sanitizations.size() == 5);
}

TEST_CASE("unknown fixture") {
  CHECK_THROWS_AS(fixtures::load_polynomial("exp9"), Error);
  CHECK_THROWS_AS(fixtures::load_polynomial("exp6-ising"), Error);
}
