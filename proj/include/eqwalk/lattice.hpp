#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eqwalk {

using Complex = std::complex<double>;

/// Two-component spin amplitude (up, down).
struct Spinor {
  Complex up{1.0, 0.0};
  Complex down{0.0, 0.0};
};

/// Closed range of integer lattice sites [x_min, x_max].
class SiteWindow {
 public:
  SiteWindow(int x_min, int x_max);

  /// Smallest window that holds every site reachable in `steps` steps from `x0`.
  static SiteWindow for_walk(int x0, int steps);

  int x_min() const { return x_min_; }
  int x_max() const { return x_max_; }
  std::size_t size() const { return static_cast<std::size_t>(x_max_ - x_min_ + 1); }
  bool contains(int x) const { return x >= x_min_ && x <= x_max_; }
  std::size_t index(int x) const { return static_cast<std::size_t>(x - x_min_); }
  int site(std::size_t i) const { return x_min_ + static_cast<int>(i); }

  friend bool operator==(const SiteWindow&, const SiteWindow&) = default;

 private:
  int x_min_;
  int x_max_;
};

/// Pure walker state: one spinor per site of a finite window.
class SpinorState {
 public:
  /// Takes ownership of the per-site amplitudes; both arrays must match the window size.
  SpinorState(SiteWindow window, std::vector<Complex> up, std::vector<Complex> down);

  /// Walker sitting at `x0` with internal state `spinor`.
  /// Throws DomainError if x0 is outside the window or |spinor| != 1.
  static SpinorState localized(int x0, Spinor spinor, SiteWindow window);

  const SiteWindow& window() const { return window_; }
  const std::vector<Complex>& up() const { return up_; }
  const std::vector<Complex>& down() const { return down_; }
  std::vector<Complex>& up() { return up_; }
  std::vector<Complex>& down() { return down_; }

  Complex up_at(int x) const { return up_[window_.index(x)]; }
  Complex down_at(int x) const { return down_[window_.index(x)]; }

  double norm_squared() const;

  /// Interleaved site-major vector, index 2*i + s with s = 0 (up), 1 (down).
  Eigen::VectorXcd flatten() const;
  static SpinorState from_flat(SiteWindow window, const Eigen::VectorXcd& flat);

 private:
  SiteWindow window_;
  std::vector<Complex> up_;
  std::vector<Complex> down_;
};

/// Mixed walker state. The matrix is dense over site (x) spin with the same
/// interleaved ordering as SpinorState::flatten().
class DensityState {
 public:
  /// Checks Hermiticity and unit trace to 1e-12; throws DomainError otherwise.
  DensityState(SiteWindow window, Eigen::MatrixXcd matrix);

  static DensityState from_pure(const SpinorState& state);

  const SiteWindow& window() const { return window_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  Complex trace() const { return matrix_.trace(); }
  double min_eigenvalue() const;

 private:
  SiteWindow window_;
  Eigen::MatrixXcd matrix_;
};

/// Discrete Fourier picture of a SpinorState on the grid k_j = 2*pi*j/L - pi.
struct MomentumSpinor {
  SiteWindow window;  // source window, needed for the inverse
  std::vector<double> k_grid;
  std::vector<Complex> up;
  std::vector<Complex> down;

  /// Sum over k of (|u|^2 + |d|^2) * dk / (2 pi).
  double parseval_norm() const;
};

MomentumSpinor momentum_transform(const SpinorState& state);
SpinorState inverse_momentum_transform(const MomentumSpinor& momentum);

/// tr(rho^2).
double purity(const DensityState& rho);

}  // namespace eqwalk
