#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eqwalk/lattice.hpp"

namespace eqwalk {

/// Bloch phase 2*pi*n/m kept as a fraction in lowest terms with m > 0.
class RationalPhase {
 public:
  /// Reduces by gcd(n, m); throws DomainError if m == 0.
  RationalPhase(long long n, long long m);

  long long n() const { return n_; }
  long long m() const { return m_; }
  double phi() const;

  friend bool operator==(const RationalPhase&, const RationalPhase&) = default;

 private:
  long long n_;
  long long m_;
};

enum class Band { Plus, Minus };

/// diag(e^{-ik}, e^{ik}) * R(theta): one zero-field step at quasi momentum k.
Eigen::Matrix2cd free_step_matrix(double k, double theta);

/// Returns (omega, -omega) with cos(omega) = cos(theta) cos(k), omega in [0, pi].
std::pair<double, double> dispersion_free(double k, double theta);

/// d(omega)/dk for the chosen band, in sites per step.
/// Throws SingularityError where the two bands touch.
double group_velocity(double k, double theta, Band band);

/// One-step operator restricted to Bloch states of reduced momentum kappa, in the
/// unit-cell basis (r, s), r = 0..m-1, index 2r + s.
/// Throws DomainError unless kappa lies in (-pi/m, pi/m].
Eigen::MatrixXcd bloch_matrix(const RationalPhase& rational, double kappa, double theta);

struct BandStructure {
  RationalPhase rational;
  double theta;
  std::vector<double> kappa_grid;
  /// eigenphases[j][b]: quasi-energy of band b at kappa_grid[j], in (-pi, pi].
  std::vector<std::vector<double>> eigenphases;
  /// eigenvectors[j].col(b) belongs to eigenphases[j][b].
  std::vector<Eigen::MatrixXcd> eigenvectors;

  std::size_t band_count() const { return static_cast<std::size_t>(2 * rational.m()); }
};

/// Diagonalizes the Bloch matrix on kappa_j = -pi/m + (j+1) * 2pi/(m * grid_points) and
/// links eigenphases into continuous bands by eigenvector overlap.
BandStructure band_structure(const RationalPhase& rational, double theta, int grid_points);

/// Per band: spread (max - min) of the unwrapped eigenphase over the grid.
std::vector<double> band_flatness(const BandStructure& bands);

struct BandTransferReport {
  double k;
  std::pair<double, double> populations_before;
  std::pair<double, double> populations_after;
};

/// Starts in the + band at k, applies one electric step in momentum space and
/// projects onto the bands at k + phi.
BandTransferReport band_transfer(double k, double theta, double phi);

/// Sorted group velocities of every band, by centered differences with spacing
/// 2*pi/grid_points. The reduced zone is sampled at grid_points / m midpoints so
/// that fields with different m are compared at equal momentum density.
std::vector<double> velocity_multiset(const RationalPhase& rational, double theta,
                                      int grid_points);

/// Eigenphase in (-pi, pi].
double eigenphase(Complex eigenvalue);

}  // namespace eqwalk
