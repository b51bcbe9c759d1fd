#include "qafold/spectral.hpp"

#include <cmath>
#include <limits>

#include "qafold/errors.hpp"
#include "qafold/units.hpp"

namespace qafold::dynamics {

using namespace units;

void BathParams::validate() const {
  if (!(eta >= 0)) throw Error(ErrorKind::validation, "bath eta must be >= 0");
  if (!(A_1f >= 0)) throw Error(ErrorKind::validation, "bath A_1f must be >= 0");
  if (!(T_mK > 0)) throw Error(ErrorKind::validation, "bath temperature must be > 0");
  if (!(omega_c_ghz > 0)) throw Error(ErrorKind::validation, "bath omega_c must be > 0");
  if (!(Ip0_uA > 0)) throw Error(ErrorKind::validation, "bath Ip0 must be > 0");
  for (std::size_t k = 1; k < Ip_of_tau.size(); ++k)
    if (Ip_of_tau[k].first <= Ip_of_tau[k - 1].first)
      throw Error(ErrorKind::validation, "Ip_of_tau must be sorted by tau");
}

double BathParams::persistent_current(double tau) const {
  double ip = Ip0_uA;
  if (!Ip_of_tau.empty()) {
    if (tau <= Ip_of_tau.front().first) {
      ip = Ip_of_tau.front().second;
    } else if (tau >= Ip_of_tau.back().first) {
      ip = Ip_of_tau.back().second;
    } else {
      for (std::size_t k = 1; k < Ip_of_tau.size(); ++k)
        if (tau <= Ip_of_tau[k].first) {
          auto [t0, i0] = Ip_of_tau[k - 1];
          auto [t1, i1] = Ip_of_tau[k];
          ip = i0 + (i1 - i0) * (tau - t0) / (t1 - t0);
          break;
        }
    }
  }
  return ip * 1e-6;
}

namespace {

double kT(const BathParams& b) { return boltzmann * b.T_mK * 1e-3; }

// x / (1 - e^{-x}) with its limit 1 at x = 0.
double bose_factor(double x) { return x == 0 ? 1.0 : x / -std::expm1(-x); }

}  // namespace

double flux_noise_lf(double omega, const BathParams& b) {
  double amp = b.A_1f * 1e-9 * flux_quantum;
  double x = hbar * omega / kT(b);
  if (omega == 0) return b.alpha > 0 ? std::numeric_limits<double>::infinity() : amp * amp;
  // (A^2/kT) hbar w |w|^-a / (1 - e^{-hbar w/kT}) = A^2 |w|^-a * x/(1-e^{-x})
  return amp * amp * std::pow(std::abs(omega), -b.alpha) * bose_factor(x);
}

double flux_noise_hf(double omega, const BathParams& b) {
  double ip0 = b.Ip0_uA * 1e-6;
  double wc = ghz_to_rad_per_s(b.omega_c_ghz);
  double x = hbar * omega / kT(b);
  // eta w e^{-|w|/wc} / (1 - e^{-x}) = eta (kT/hbar) e^{-|w|/wc} x/(1-e^{-x})
  return hbar * hbar / (4 * ip0 * ip0) * b.eta * (kT(b) / hbar) * std::exp(-std::abs(omega) / wc) * bose_factor(x);
}

double spectral_density(double omega, const BathParams& b, double ip) {
  double lf = b.A_1f > 0 ? flux_noise_lf(omega, b) : 0.0;
  double hf = b.eta > 0 ? flux_noise_hf(omega, b) : 0.0;
  return 4 * ip * ip * (lf + hf);
}

double transition_rate(double overlap, double delta_ghz, const BathParams& b, double ip) {
  if (overlap == 0 || delta_ghz == 0) return 0;
  double omega = ghz_to_rad_per_s(delta_ghz);
  return per_s_to_per_ns(0.25 * overlap * spectral_density(omega, b, ip) / (hbar * hbar));
}

}  // namespace qafold::dynamics
