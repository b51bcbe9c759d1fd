#include <doctest.h>

#include <filesystem>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/pipeline.hpp"

using namespace qafold;
using namespace qafold::pipeline;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("qafold_pipeline_" + name);
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exp6 configuration reproduces the hardware Hamiltonian") {
  auto cfg = fixture_config("exp6");
  cfg.output_dir = scratch("exp6");
  auto r = run_pipeline(cfg);
  REQUIRE(r.branches.size() == 1);
  const auto& b = r.branches[0];
  CHECK(b.quadratization.quadratic == fixtures::load_polynomial("exp6-quadratic"));
  CHECK(b.logical == fixtures::load_ising("exp6-ising"));
  REQUIRE(b.embedded);
  CHECK(b.embedded->model == fixtures::load_ising("exp6-embedded"));
  CHECK(b.verification->ok());
  CHECK(*r.best_energy == Rational(-1));
  REQUIRE(b.ground_folds.size() == 1);
  CHECK(b.ground_folds[0] == "(0,0) (1,0) (1,1) (0,1)");

  auto manifest = io::read_json(r.manifest_path);
  CHECK(manifest["run_hash"] == r.run_hash);
  for (const auto& a : manifest["artifacts"]) {
    auto path = (fs::path(cfg.output_dir) / a["path"].get<std::string>()).string();
    CHECK(sha256_hex(io::read_file(path)) == a["sha256"].get<std::string>());
  }
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("run hash depends on the seed only") {
  auto cfg = fixture_config("exp3");
  cfg.solver = SolverKind::sa;
  cfg.anneal.reads = 50;
  cfg.seed = 11;
  cfg.output_dir = scratch("seed_a");
  auto a = run_pipeline(cfg);
  cfg.output_dir = scratch("seed_b");
  auto b = run_pipeline(cfg);
  CHECK(a.run_hash == b.run_hash);
  cfg.seed = 12;
  cfg.output_dir = scratch("seed_c");
  auto c = run_pipeline(cfg);
  CHECK(a.run_hash != c.run_hash);
  CHECK(*a.best_energy == Rational(-5));
  for (auto n : {"seed_a", "seed_b", "seed_c"}) fs::remove_all(scratch(n));
}

TEST_CASE("divide and conquer branches") {
  auto cfg = fixture_config("psvkma-scheme2");
  cfg.output_dir = scratch("dc");
  auto r = run_pipeline(cfg);
  REQUIRE(r.branches.size() == 2);
  CHECK(r.branches[0].fixed == fixtures::load_polynomial("exp4"));
  CHECK(r.branches[1].fixed == fixtures::load_polynomial("exp1"));
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("two residues give the trivial fold") {
  PipelineConfig cfg;
  cfg.instance = lattice::FoldingInstance::standard(lattice::parse_sequence("HH"), lattice::InteractionModel::hp());
  cfg.output_dir = scratch("trivial");
  auto r = run_pipeline(cfg);
  CHECK(r.trivial);
  CHECK(r.branches.empty());
  CHECK(*r.trivial_fold == "(0,0) (1,0)");
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("failures name their stage") {
  auto cfg = fixture_config("exp3");
  cfg.output_dir = scratch("stage");
  cfg.plan.collapses = {{1, 9, std::nullopt}};
  try {
    run_pipeline(cfg);
    FAIL("expected a stage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::stage);
    CHECK(std::string(e.what()).find("stage quadratize") == 0);
  }
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("configuration validation") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.polynomial_fixture = "exp4";
  cfg.fixings = {{{9, 0}}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.fixings = {{{1, 2}}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.fixings = {{{1, 1}}};
  CHECK_NOTHROW(cfg.validate());
  auto round = PipelineConfig::from_json(fixture_config("exp6").to_json());
  CHECK(round.to_json() == fixture_config("exp6").to_json());
  CHECK_THROWS_AS(PipelineConfig::from_json(io::json::parse(R"({"instance": "missing-file.json"})")), Error);
}
