#pragma once

#include <numbers>

// CODATA 2018 exact SI values. Energies on the dynamics side are frequencies
// E/h in GHz and times are in ns, so 2*pi*E*t is a phase.
namespace qafold::units {

inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = planck / (2 * std::numbers::pi);
inline constexpr double boltzmann = 1.380649e-23;         // J / K
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double flux_quantum = planck / (2 * elementary_charge);  // Wb

inline constexpr double ghz = 1e9;

/// E/h in GHz -> joules.
constexpr double ghz_to_joule(double f_ghz) { return planck * f_ghz * ghz; }
/// k_B T / h in GHz.
constexpr double mk_to_ghz(double t_mk) { return boltzmann * t_mk * 1e-3 / planck / ghz; }
/// Cyclic frequency in GHz -> angular frequency in rad/s.
constexpr double ghz_to_rad_per_s(double f_ghz) { return 2 * std::numbers::pi * f_ghz * ghz; }
/// Rate in 1/s -> 1/ns.
constexpr double per_s_to_per_ns(double r) { return r * 1e-9; }

}  // namespace qafold::units
