#include <doctest.h>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/lattice.hpp"

using namespace qafold;
using namespace qafold::lattice;

TEST_CASE("turn codes decode to unit steps") {
  Fold f = decode_turns(make_turns("01110010"));
  REQUIRE(f.size() == 5);
  CHECK(f[1] == Point{1, 0});
  CHECK(f[2] == Point{1, 1});
  CHECK(f[3] == Point{1, 0});
  CHECK(f[4] == Point{0, 0});
  CHECK_FALSE(is_self_avoiding(f));
  CHECK(encode_fold(f).bits == "01110010");
}

TEST_CASE("encode rejects non-unit steps") {
  Fold f{{0, 0}, {2, 0}};
  CHECK_THROWS_AS(encode_fold(f), Error);
}

TEST_CASE("reflection swaps up and down") {
  CHECK(reflect(make_turns("011100")).bits == "010011");
}

TEST_CASE("standard templates") {
  CHECK(TurnTemplate::standard(4, false).pattern() == "010qqq");
  CHECK(TurnTemplate::standard(4, true).pattern() == "01qqqq");
  CHECK(TurnTemplate::standard(2, false).pattern() == "01");
  CHECK(TurnTemplate::standard(2, false).free_count() == 0);
  CHECK_THROWS_AS(TurnTemplate::standard(1, false), Error);
  CHECK_THROWS_AS(TurnTemplate::parse("01x"), Error);
}

TEST_CASE("template fill and match are inverse") {
  auto t = TurnTemplate::parse("010q1qq0");
  for (std::uint64_t a = 0; a < 8; ++a) {
    auto m = t.match(t.fill(a));
    REQUIRE(m.has_value());
    CHECK(*m == a);
  }
  CHECK_FALSE(t.match(make_turns("11111111")).has_value());
  CHECK(t.position_of(1) == 4);
  CHECK(t.position_of(3) == 7);
}

TEST_CASE("with_fixed keeps the remaining variables in order") {
  auto t = TurnTemplate::standard(6, false).with_fixed({{1, 0}});
  CHECK(t.pattern() == "0100qqqqqq");
  auto e3 = t.with_fixed({{1, 1}, {2, 0}, {4, 0}});
  CHECK(e3.pattern() == "010010q0qq");
}

// Counts from an independent brute-force enumeration.
TEST_CASE("self-avoiding counts") {
  CHECK(count_self_avoiding(TurnTemplate::standard(3, false)) == 2);
  CHECK(count_self_avoiding(TurnTemplate::standard(4, false)) == 6);
  CHECK(count_self_avoiding(TurnTemplate::standard(5, false)) == 17);
  CHECK(count_self_avoiding(TurnTemplate::standard(6, false)) == 48);
  CHECK(count_distinct_shapes(TurnTemplate::standard(6, false), false) == 36);
  CHECK(count_distinct_shapes(TurnTemplate::standard(6, false), true) == 22);
  CHECK(count_distinct_shapes(TurnTemplate::standard(3, false), false) == 2);
  CHECK(count_self_avoiding(TurnTemplate::standard(7, false)) == 132);
  CHECK(count_self_avoiding(TurnTemplate::standard(4, true)) == 9);
  CHECK(count_self_avoiding(TurnTemplate::standard(6, true)) == 71);
  CHECK(count_self_avoiding(TurnTemplate::parse("01010qqqqq")) == 17);
  CHECK(count_self_avoiding(TurnTemplate::parse("0100qqqqqq")) == 23);
  CHECK(count_self_avoiding(TurnTemplate::parse("010010q0qq")) == 6);
}

TEST_CASE("HPPH energies on all eight folds") {
  auto inst = fixtures::load_instance("hpph-instance");
  const int expected[8] = {0, 0, -1, 1, 0, 0, 1, 0};
  for (std::uint64_t a = 0; a < 8; ++a) CHECK(inst.energy(a) == Rational(expected[a]));
  auto rows = enumerate_landscape(inst);
  CHECK(rows.front().energy == Rational(-1));
  CHECK(rows.front().assignment == 2);
  CHECK(rows.front().valid);
  CHECK(format_points(rows.front().fold) == "(0,0) (1,0) (1,-1) (0,-1)");
}

TEST_CASE("overlap penalty still counts contacts") {
  // Right, left, right: residues 1,3 and 2,4 coincide while H1 and H4 touch.
  Fold f = decode_turns(make_turns("011001"));
  CHECK(fold_energy(f, parse_sequence("HPPH"), InteractionModel::hp(), {}, Rational(2)) == Rational(3));
  CHECK(fold_energy(f, parse_sequence("HPPH"), InteractionModel::hp(), {}, Rational(5)) == Rational(9));
}

TEST_CASE("chaperone instance reproduces the external terms") {
  auto inst = fixtures::load_instance("hpph-chaperone-instance");
  CHECK(inst.arity() == 4);
  // q = 01 00 ..: third residue moves down into the chaperone.
  CHECK(inst.energy(0b0000) >= Rational(4));
}

TEST_CASE("contact tables") {
  auto m = InteractionModel::table(ModelKind::custom, {{"A", "B", Rational(-2)}, {"A", "A", Rational(-1)}});
  CHECK(m.pair_energy("B", "A") == Rational(-2));
  CHECK_THROWS_AS(InteractionModel::table(ModelKind::custom, {{"A", "B", Rational(-2)}, {"B", "A", Rational(-3)}}), Error);
  CHECK_THROWS_AS(m.check_sequence(parse_sequence("AZ")), Error);
}

TEST_CASE("instance validation") {
  auto inst = fixtures::load_instance("hpph-instance");
  inst.overlap_penalty = Rational(-1);
  CHECK_THROWS_AS(inst.validate(), Error);
  inst = fixtures::load_instance("hpph-instance");
  inst.turns = TurnTemplate::parse("01qq");
  CHECK_THROWS_AS(inst.validate(), Error);
}
