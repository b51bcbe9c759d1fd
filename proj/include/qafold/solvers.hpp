#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qafold/ising.hpp"
#include "qafold/lattice.hpp"

namespace qafold::solvers {

using ising::IsingModel;

struct Sample {
  std::uint64_t assignment = 0;  // bit i set <=> s_i = -1
  std::vector<int> spins;
  Rational energy;               // Ising energy E(s), exact
  std::size_t count = 1;
};

struct SampleSet {
  std::vector<Sample> samples;   // sorted by energy, then assignment
  std::map<std::string, std::string> info;

  std::size_t total_reads() const;
  std::optional<Rational> min_energy() const;
  std::size_t count_at(const Rational& energy) const;
};

/// Every minimizer, ascending assignment order.
SampleSet exhaustive_ground_states(const IsingModel& m);

/// Geometric inverse-temperature ramp, beta in units of the model's energy.
struct BetaSchedule {
  double beta_start = 0.1;
  double beta_end = 10.0;
  int sweeps = 1000;

  std::vector<double> betas() const;
  void validate() const;
};

struct AnnealOptions {
  BetaSchedule schedule;
  int reads = 100;
  std::uint64_t seed = 0;
  /// Report the lowest-energy state visited in a read instead of the last one.
  bool keep_best = true;
};

/// Single-spin-flip Metropolis, fixed index order within a sweep. Each read
/// draws from its own stream derived from (seed, read).
SampleSet simulated_anneal(const IsingModel& m, const AnnealOptions& options);

/// Visit counts of each state after every sweep at fixed beta (starting from all +1).
std::vector<std::uint64_t> metropolis_histogram(const IsingModel& m, double beta, std::uint64_t sweeps,
                                                std::uint64_t seed);

/// Exact Boltzmann weights over all 2^n states.
std::vector<double> gibbs_distribution(const IsingModel& m, double beta);

struct LandscapeEntry {
  std::uint64_t assignment = 0;
  Rational energy;
  std::optional<bool> valid;         // when a decoder is supplied
  std::string turns;
  std::string points;
  int level = 0;                      // index of the degeneracy class
};

struct Landscape {
  std::vector<LandscapeEntry> rows;   // energy ascending, then assignment
  std::vector<std::pair<Rational, std::size_t>> levels;
};

/// Per-assignment table of a polynomial; with a template the fold is decoded.
Landscape landscape_report(const compiler::Polynomial& p, const lattice::TurnTemplate* decoder = nullptr);

}  // namespace qafold::solvers
