#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qafold/ising.hpp"
#include "qafold/spectral.hpp"

namespace qafold::dynamics {

using ising::IsingModel;

/// H(tau) = A(tau) (-sum sigma_x) + B(tau) H_p, A and B in GHz.
struct AnnealSchedule {
  std::vector<double> tau;
  std::vector<double> A;
  std::vector<double> B;
  double t_run_us = 1.0;

  /// A(tau) = A0 (1 - tau), B(tau) = B0 tau.
  static AnnealSchedule linear(double A0, double B0, double t_run_us);
  /// Columns tau, A_GHz, B_GHz (header line optional).
  static AnnealSchedule parse_csv(const std::string& text, double t_run_us);

  double a(double t) const;
  double b(double t) const;
  double t_run_ns() const { return t_run_us * 1e3; }
  void validate() const;
};

inline constexpr double kDefaultA0 = 5.0;  // GHz
inline constexpr double kDefaultB0 = 5.0;  // GHz
inline constexpr int kMaxDenseSpins = 12;

/// Diagonal of H_p (Ising energy of every basis state) and the -sum sigma_x part.
struct AnnealingOperator {
  int n = 0;
  Eigen::VectorXd problem;
  Eigen::MatrixXd driver;

  explicit AnnealingOperator(const IsingModel& m);
  Eigen::MatrixXd at(double a, double b) const;
  std::size_t dim() const { return static_cast<std::size_t>(problem.size()); }
};

/// Dense real-symmetric a (-sum sigma_x) + b H_p. Basis index bit i set <=> s_i = -1.
Eigen::MatrixXd build_hamiltonian(const IsingModel& m, double a, double b);

struct SpectrumResult {
  std::vector<double> tau;
  std::vector<std::vector<double>> gaps;  // E_k - E_0 for k < levels
  double tau_star = 0;                    // location of the minimum first gap
  double min_gap = 0;                     // GHz
};

SpectrumResult instantaneous_spectrum(const IsingModel& m, const AnnealSchedule& s, int levels,
                                      const std::vector<double>& tau_grid);

struct EvolutionResult {
  std::vector<double> tau;
  std::vector<std::vector<double>> gaps;         // E_k - E_0, k < recorded levels
  std::vector<std::vector<double>> populations;  // instantaneous eigenstate populations
  std::vector<double> final_probabilities;       // computational basis, 2^n
  double norm_drift = 0;                         // |1 - trace| (or |1 - <psi|psi>|)
  double min_population = 0;                     // most negative value seen before clipping
  std::size_t steps = 0;
};

enum class ClosedMethod { magnus, adiabatic_frame };

struct ClosedOptions {
  ClosedMethod method = ClosedMethod::magnus;
  double tolerance = 1e-10;  // per-step error target for step doubling
  int record_points = 101;
  int record_levels = 8;
  int frame_steps = 4000;    // adiabatic-frame method only
  int frame_levels = 0;      // 0 = all levels
};

/// Schroedinger evolution from the uniform superposition (ground state of -sum sigma_x).
EvolutionResult evolve_closed(const IsingModel& m, const AnnealSchedule& s, const ClosedOptions& options = {});

struct OpenOptions {
  int levels = 24;
  int steps = 4000;
  int record_points = 101;
  int record_levels = 8;
  /// Hold H at this tau for t_run instead of sweeping.
  std::optional<double> frozen_tau;
};

/// Secular master equation in the instantaneous eigenbasis truncated to `levels`.
EvolutionResult evolve_open(const IsingModel& m, const AnnealSchedule& s, const BathParams& bath,
                            const OpenOptions& options = {});

/// Population generator G (G_ba = W_{a->b}, columns sum to zero) of the lowest
/// `levels` eigenstates of H(tau), rates in 1/ns.
Eigen::MatrixXd rate_matrix(const IsingModel& m, const AnnealSchedule& s, const BathParams& bath, double tau,
                            int levels, Eigen::VectorXd* energies = nullptr);

/// Normalised null vector of G.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& G);

/// Boltzmann weights of energies (GHz) at temperature T (mK).
Eigen::VectorXd gibbs_weights(const Eigen::VectorXd& energies_ghz, double T_mK);

}  // namespace qafold::dynamics
