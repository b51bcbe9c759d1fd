#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qafold/chimera.hpp"
#include "qafold/ising.hpp"

namespace qafold::embedding {

using hardware::HardwareGraph;
using ising::IsingModel;

/// Logical spin (0-based) -> chain of physical qubits.
struct Embedding {
  std::map<int, std::vector<int>> chains;
  /// Per-chain ferromagnetic penalty; chains without an entry get the auto rule.
  std::map<int, Rational> gamma;
  /// Logical edge (i, j), i < j -> physical coupler (qubit of chain i, qubit of chain j).
  std::map<std::pair<int, int>, std::pair<int, int>> edge_assign;

  int qubit_count() const;
  /// Physical qubits in increasing id order.
  std::vector<int> qubits() const;
  bool operator==(const Embedding&) const = default;
};

struct EmbedOptions {
  std::uint64_t seed = 0;
  int attempts = 24;
  int rounds = 32;  // rip-up-and-reroute passes per attempt
  std::map<int, std::vector<int>> hint;
};

/// Seeded vertex-expansion heuristic with overlap-penalised rerouting.
/// Hinted chains are fixed. Throws an embedding error naming unplaced variables.
Embedding embed(const IsingModel& m, const HardwareGraph& g, const EmbedOptions& options = {});

enum class FieldPlan { root, split };

struct ApplyOptions {
  FieldPlan fields = FieldPlan::root;
  /// Uniform chain strength; overrides the per-chain values in the embedding.
  std::optional<Rational> gamma;
};

struct EmbeddedIsing {
  /// Compact physical model. scale and offset map its energy back onto the
  /// logical binary energy, so consistent samples report the original values.
  IsingModel model;
  std::vector<int> qubits;        // compact index -> physical id
  std::map<int, int> index;       // physical id -> compact index
  std::vector<int> owner;         // compact index -> logical spin
  Embedding embedding;            // resolved gamma and edge assignment
  std::vector<std::pair<int, int>> chain_couplers;  // compact pairs carrying -gamma

  bool consistent(std::uint64_t physical_assignment) const;
  std::uint64_t lift(std::uint64_t logical_assignment) const;
};

/// Chain-strength rule: smallest multiple of 1/2 that keeps every broken-chain
/// state above max(0, logical minimum). Exhaustive up to kGammaSearchQubits,
/// otherwise an analytic bound.
inline constexpr int kGammaSearchQubits = 20;
Rational auto_gamma(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                    FieldPlan fields = FieldPlan::root);

/// Throws a validation error when the embedding is structurally invalid or an
/// edge assignment names a coupler that does not exist.
EmbeddedIsing apply_embedding(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                              const ApplyOptions& options = {});

enum class ChainPolicy { discard, majority };

struct Unembedded {
  std::optional<std::vector<int>> spins;  // empty when discarded
  int broken_chains = 0;
};

/// spins are indexed like EmbeddedIsing::qubits. Majority ties resolve to +1.
Unembedded unembed(const std::vector<int>& spins, const EmbeddedIsing& emb, ChainPolicy policy);

struct VerificationReport {
  std::vector<std::string> violations;
  bool spectrum_checked = false;
  bool minimizers_match = false;
  std::optional<Rational> min_broken_energy;  // binary-equivalent units
  bool ok() const { return violations.empty(); }
};

inline constexpr int kSpectrumCheckQubits = 12;

VerificationReport verify_embedding(const IsingModel& m, const Embedding& e, const HardwareGraph& g,
                                    const ApplyOptions& options = {});

}  // namespace qafold::embedding
