#pragma once

#include <numbers>
#include <vector>

#include "eqwalk/lattice.hpp"

namespace eqwalk {

/// Parameters of one electric walk step. The Bloch phase is reduced into
/// [0, 2*pi) on construction; the raw value is kept for reporting.
class WalkParams {
 public:
  explicit WalkParams(double phi, double theta = std::numbers::pi / 4, double dephase_p = 0.0);

  double phi() const { return phi_; }
  double phi_raw() const { return phi_raw_; }
  double theta() const { return theta_; }
  double dephase_p() const { return dephase_p_; }

 private:
  double phi_raw_;
  double phi_;
  double theta_;
  double dephase_p_;
};

/// Reduces an angle into [0, 2*pi).
double reduce_angle(double radians);

/// Coin exp(-i theta sigma_y), i.e. the real rotation [[c, -s], [s, c]] at every site.
SpinorState apply_coin(const SpinorState& state, double theta);

/// Spin-up moves one site right, spin-down one site left.
/// Throws WindowOverflow if non-zero amplitude would leave the window.
SpinorState apply_shift(const SpinorState& state);

/// Multiplies the amplitude at site x by exp(i phi x).
SpinorState apply_field(const SpinorState& state, double phi);

/// One full step: field(shift(coin(state))).
SpinorState step(const SpinorState& state, const WalkParams& params);

/// Trajectory of `steps` steps; element 0 is the input.
std::vector<SpinorState> evolve(const SpinorState& state, const WalkParams& params, int steps);

/// Spin phase damping with Z = sigma_z on the spin factor:
/// rho -> (1 - p/2) rho + (p/2) Z rho Z, so every spin coherence shrinks by (1 - p)
/// and p = 1 removes them entirely.
DensityState dephase(const DensityState& rho, double p);

/// One unitary step by conjugation followed by dephase(., params.dephase_p()).
DensityState step_density(const DensityState& rho, const WalkParams& params);

std::vector<DensityState> evolve_density(const DensityState& rho, const WalkParams& params,
                                         int steps);

}  // namespace eqwalk
