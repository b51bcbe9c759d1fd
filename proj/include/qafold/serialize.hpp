#pragma once

#include <string>

#include <json.hpp>

#include "qafold/chimera.hpp"
#include "qafold/dynamics.hpp"
#include "qafold/embedding.hpp"
#include "qafold/ising.hpp"
#include "qafold/lattice.hpp"
#include "qafold/polynomial.hpp"
#include "qafold/quadratize.hpp"
#include "qafold/solvers.hpp"

namespace qafold::io {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

/// Shortest round-tripping decimal with 17 significant digits.
std::string format_double(double v);

json rational_to_json(const Rational& r);
/// Accepts {num, den}, an integer, or a "p/q" string.
Rational rational_from_json(const json& j);

json to_json(const compiler::Polynomial& p);
compiler::Polynomial polynomial_from_json(const json& j);

json to_json(const compiler::Quadratization& q);
compiler::QuadratizationPlan plan_from_json(const json& j);

json to_json(const ising::IsingModel& m);
ising::IsingModel ising_from_json(const json& j);

json graph_to_json(const hardware::HardwareGraph& g);
hardware::HardwareGraph graph_from_json(const json& j);

json to_json(const embedding::Embedding& e);
embedding::Embedding embedding_from_json(const json& j);

/// {sequence, model, pair_energies?, overlap_penalty, external_potential?, fixed_bits?, template?}
json to_json(const lattice::FoldingInstance& inst);
lattice::FoldingInstance instance_from_json(const json& j);

json to_json(const dynamics::BathParams& b);
dynamics::BathParams bath_from_json(const json& j);

std::string schedule_csv(const dynamics::AnnealSchedule& s);

/// assignment_bits, valid, energy_num, energy_den, points
std::string landscape_csv(const std::vector<lattice::LandscapeRow>& rows, std::size_t arity);
std::string landscape_csv(const solvers::Landscape& l, std::size_t arity);

/// assignment, energy_num, energy_den, count
std::string samples_csv(const solvers::SampleSet& s, int n);
json to_json(const solvers::SampleSet& s, int n);

/// tau, gap_k..., pop_k...
std::string trajectory_csv(const dynamics::EvolutionResult& r);
json final_probabilities_json(const dynamics::EvolutionResult& r, int n);

}  // namespace qafold::io
