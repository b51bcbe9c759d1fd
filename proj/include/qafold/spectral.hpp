#pragma once

#include <utility>
#include <vector>

namespace qafold::dynamics {

/// Flux-noise bath: 1/f-like low-frequency part plus an ohmic high-frequency part.
struct BathParams {
  double eta = 0.4;            // dimensionless ohmic coupling
  double A_1f = 3.0;           // low-frequency amplitude, n Phi_0
  double alpha = 1.0;
  double omega_c_ghz = 10.0;   // cutoff omega_c / 2 pi, GHz
  double T_mK = 20.0;
  double Ip0_uA = 1.0;         // persistent current at which eta is quoted
  /// Optional persistent current Ip(tau) in uA, linearly interpolated.
  std::vector<std::pair<double, double>> Ip_of_tau;

  void validate() const;
  double persistent_current(double tau) const;  // A
};

/// Flux spectral densities (Wb^2 s) at angular frequency omega (rad/s).
double flux_noise_lf(double omega, const BathParams& bath);
double flux_noise_hf(double omega, const BathParams& bath);

/// S(omega) = 4 Ip^2 (S_LF + S_HF) in J^2 s. omega = 0 returns the limit
/// (infinite for alpha > 0).
double spectral_density(double omega, const BathParams& bath, double persistent_current);

/// Transition rate in 1/ns for |<b|sigma_z|a>|^2 = overlap and E_a - E_b = delta_ghz,
/// with the coupling -1/2 sigma_z Q.
double transition_rate(double overlap, double delta_ghz, const BathParams& bath, double persistent_current);

}  // namespace qafold::dynamics
