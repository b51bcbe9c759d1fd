#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qafold/embedding.hpp"
#include "qafold/quadratize.hpp"
#include "qafold/serialize.hpp"
#include "qafold/solvers.hpp"

namespace qafold::pipeline {

using io::json;

/// Exact multilinear form of the lattice energy over the instance's free bits.
compiler::Polynomial compile_instance(const lattice::FoldingInstance& inst);

std::string sha256_hex(const std::string& data);

struct GraphSpec {
  int M = 1;
  int N = 1;
  int K = 4;
  std::vector<int> masked;
};

enum class SolverKind { exhaustive, sa };

struct PipelineConfig {
  std::string name = "run";
  /// Exactly one source: a folding instance or a bundled polynomial fixture.
  std::optional<lattice::FoldingInstance> instance;
  std::optional<std::string> polynomial_fixture;
  /// Turn template used to decode folds when starting from a fixture.
  std::optional<std::string> decode_template;
  /// Divide-and-conquer fixings (1-based variable -> value); empty means one full run.
  std::vector<std::map<int, int>> fixings;
  compiler::QuadratizationPlan plan = compiler::QuadratizationPlan::automatic();
  bool normalize = true;
  std::optional<GraphSpec> graph;
  std::optional<embedding::Embedding> embedding;  // explicit chains; otherwise the heuristic
  std::map<int, std::vector<int>> hints;
  std::optional<Rational> gamma;
  SolverKind solver = SolverKind::exhaustive;
  solvers::AnnealOptions anneal;
  std::uint64_t seed = 0;
  std::string output_dir = ".";

  /// Relative paths (instance, embedding, fixtures by name) resolve against base_dir.
  static PipelineConfig from_json(const json& j, const std::string& base_dir = ".");
  json to_json() const;
  void validate() const;
};

struct BranchReport {
  std::map<int, int> fixing;
  std::string directory;
  compiler::Polynomial fixed;
  compiler::Quadratization quadratization;
  ising::IsingModel logical;
  std::optional<embedding::EmbeddedIsing> embedded;
  std::optional<embedding::VerificationReport> verification;
  solvers::SampleSet ground;                    // logical minimizers
  std::optional<solvers::SampleSet> samples;    // solver output on the physical model
  std::vector<std::string> ground_folds;        // decoded points of each minimizer
  double success_fraction = 0;
};

struct PipelineReport {
  compiler::Polynomial polynomial;
  std::vector<BranchReport> branches;
  bool trivial = false;                         // no free bits: a single fold
  std::optional<std::string> trivial_fold;
  std::optional<Rational> best_energy;
  std::vector<std::pair<std::string, std::string>> artifacts;  // relative path, sha256
  std::string manifest_path;
  std::string run_hash;
  json summary;
};

PipelineReport run_pipeline(const PipelineConfig& cfg);

/// Bundled end-to-end configurations: "exp3", "exp6", "hpph", "psvkma-scheme2".
PipelineConfig fixture_config(const std::string& name);
std::vector<std::string> fixture_config_names();

}  // namespace qafold::pipeline
