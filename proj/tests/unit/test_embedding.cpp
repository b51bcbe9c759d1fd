#include <doctest.h>

#include "qafold/embedding.hpp"
#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/quadratize.hpp"
#include "qafold/solvers.hpp"

using namespace qafold;
using namespace qafold::embedding;

TEST_CASE("chimera sizes") {
  auto g = hardware::build_chimera(4, 4, 4);
  CHECK(g.qubit_count() == 128);
  CHECK(g.edges().size() == 352);
  auto cell = hardware::build_chimera(1, 1, 4);
  CHECK(cell.edges().size() == 16);
  CHECK(cell.has_edge(0, 4));
  CHECK_FALSE(cell.has_edge(0, 1));
  // Vertical links on side 0, horizontal on side 1.
  auto two = hardware::build_chimera(2, 2, 4);
  CHECK(two.has_edge(two.id(0, 0, 0, 2), two.id(1, 0, 0, 2)));
  CHECK(two.has_edge(two.id(0, 0, 1, 3), two.id(0, 1, 1, 3)));
  CHECK_FALSE(two.has_edge(two.id(0, 0, 0, 2), two.id(0, 1, 0, 2)));
}

TEST_CASE("masked qubits lose their couplers") {
  auto g = hardware::build_chimera(1, 1, 4, {0});
  CHECK_FALSE(g.usable(0));
  CHECK(g.usable_count() == 7);
  CHECK(g.edges().size() == 12);
  CHECK_THROWS_AS(hardware::build_chimera(1, 1, 4, {8}), Error);
}

TEST_CASE("exp6 hinted embedding reproduces the printed Hamiltonian") {
  auto g = hardware::build_chimera(1, 1, 4);
  auto e = apply_embedding(fixtures::load_ising("exp6-ising"), fixtures::load_embedding("exp6-embedding"), g);
  CHECK(e.model == fixtures::load_ising("exp6-embedded"));
  CHECK(e.chain_couplers.size() == 2);
  CHECK(e.model.coupling(1, 4) == Rational(-1));
  CHECK(e.model.coupling(2, 6) == Rational(-1));
  for (std::uint64_t a = 0; a < 64; ++a) {
    auto phys = e.lift(a);
    CHECK(e.consistent(phys));
    CHECK(e.model.binary_energy(phys) == fixtures::load_ising("exp6-ising").binary_energy(a));
  }
}

TEST_CASE("embedding verification") {
  auto g = hardware::build_chimera(1, 1, 4);
  auto m = fixtures::load_ising("exp6-ising");
  auto r = verify_embedding(m, fixtures::load_embedding("exp6-embedding"), g);
  CHECK(r.ok());
  CHECK(r.spectrum_checked);
  CHECK(r.minimizers_match);
  REQUIRE(r.min_broken_energy.has_value());
  CHECK(*r.min_broken_energy > Rational(0));

  Embedding overlap = fixtures::load_embedding("exp6-embedding");
  overlap.chains[5] = {0};
  CHECK_FALSE(verify_embedding(m, overlap, g).ok());

  Embedding split = fixtures::load_embedding("exp6-embedding");
  split.chains[1] = {1, 2};
  CHECK_FALSE(verify_embedding(m, split, g).ok());
  CHECK_THROWS_AS(apply_embedding(m, split, g), Error);

  Embedding missing = fixtures::load_embedding("exp6-embedding");
  missing.chains.erase(5);
  CHECK_FALSE(verify_embedding(m, missing, g).ok());
}

TEST_CASE("weak chains break the spectrum") {
  auto g = hardware::build_chimera(1, 1, 4);
  ApplyOptions weak;
  weak.gamma = Rational(1, 8);
  auto r = verify_embedding(fixtures::load_ising("exp6-ising"), fixtures::load_embedding("exp6-embedding"), g, weak);
  CHECK_FALSE(r.ok());
}

TEST_CASE("auto gamma keeps broken chains above the ground energy") {
  auto g = hardware::build_chimera(1, 1, 4);
  auto m = fixtures::load_ising("exp3-ising");
  auto e = fixtures::load_embedding("exp3-embedding");
  Rational gamma = auto_gamma(m, e, g);
  CHECK(gamma > Rational(0));
  CHECK((gamma * 2).denominator() == 1);
  auto r = verify_embedding(m, e, g);
  CHECK(r.ok());
  CHECK(r.minimizers_match);
}

TEST_CASE("hinted duplications fit exp6 in one cell deterministically") {
  auto g = hardware::build_chimera(1, 1, 4);
  auto m = fixtures::load_ising("exp6-ising");
  EmbedOptions o;
  o.seed = 7;
  o.hint = {{1, {1, 4}}, {3, {2, 6}}};
  auto a = embed(m, g, o);
  auto b = embed(m, g, o);
  CHECK(a == b);
  CHECK(a.chains.size() == 6);
  CHECK(verify_embedding(m, a, g).ok());
}

TEST_CASE("heuristic embeds a larger model on a 4x4 grid") {
  auto g = hardware::build_chimera(4, 4, 4);
  auto q = compiler::quadratize(fixtures::load_polynomial("exp4"), compiler::QuadratizationPlan::automatic());
  auto m = ising::to_ising(q.quadratic);
  EmbedOptions o;
  o.seed = 1;
  auto e = embed(m, g, o);
  CHECK(verify_embedding(m, e, g).violations.empty());
}

TEST_CASE("hinted chains are kept") {
  auto g = hardware::build_chimera(1, 1, 4);
  EmbedOptions o;
  o.hint = {{0, {0}}, {1, {1, 4}}};
  auto e = embed(fixtures::load_ising("exp6-ising"), g, o);
  CHECK(e.chains.at(0) == std::vector<int>{0});
  CHECK(e.chains.at(1) == std::vector<int>{1, 4});
}

TEST_CASE("impossible embedding names the unplaced variables") {
  auto g = hardware::build_chimera(1, 1, 2);
  ising::IsingModel k6(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) k6.add_coupling(i, j, Rational(1));
  EmbedOptions o;
  o.attempts = 3;
  try {
    embed(k6, g, o);
    FAIL("expected an embedding error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::embedding);
    CHECK(std::string(e.what()).find("unplaced") != std::string::npos);
  }
}

TEST_CASE("unembedding policies") {
  auto g = hardware::build_chimera(1, 1, 4);
  auto e = apply_embedding(fixtures::load_ising("exp6-ising"), fixtures::load_embedding("exp6-embedding"), g);
  // compact index == physical id here; chain {1,4} disagrees.
  std::vector<int> s(8, 1);
  s[4] = -1;
  auto maj = unembed(s, e, ChainPolicy::majority);
  CHECK(maj.broken_chains == 1);
  REQUIRE(maj.spins.has_value());
  CHECK((*maj.spins)[1] == 1);
  auto dis = unembed(s, e, ChainPolicy::discard);
  CHECK_FALSE(dis.spins.has_value());
  s[1] = -1;
  auto ok = unembed(s, e, ChainPolicy::discard);
  REQUIRE(ok.spins.has_value());
  CHECK((*ok.spins)[1] == -1);
  CHECK(ok.broken_chains == 0);
}
