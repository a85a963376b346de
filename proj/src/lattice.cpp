#include "eqwalk/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

constexpr double kNormTolerance = 1e-12;

}  // namespace

SiteWindow::SiteWindow(int x_min, int x_max) : x_min_(x_min), x_max_(x_max) {
  if (x_min > x_max) {
    throw DomainError("site window requires x_min <= x_max, got [" + std::to_string(x_min) +
                      ", " + std::to_string(x_max) + "]");
  }
}

SiteWindow SiteWindow::for_walk(int x0, int steps) {
  if (steps < 0) throw DomainError("negative step count");
  return SiteWindow(x0 - steps, x0 + steps);
}

SpinorState::SpinorState(SiteWindow window, std::vector<Complex> up, std::vector<Complex> down)
    : window_(window), up_(std::move(up)), down_(std::move(down)) {
  if (up_.size() != window_.size() || down_.size() != window_.size()) {
    throw DomainError("amplitude arrays do not match window size");
  }
}

SpinorState SpinorState::localized(int x0, Spinor spinor, SiteWindow window) {
  if (!window.contains(x0)) {
    throw DomainError("initial site " + std::to_string(x0) + " outside window");
  }
  const double n2 = std::norm(spinor.up) + std::norm(spinor.down);
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw DomainError("initial spinor is not normalized");
  }
  std::vector<Complex> up(window.size()), down(window.size());
  up[window.index(x0)] = spinor.up;
  down[window.index(x0)] = spinor.down;
  return SpinorState(window, std::move(up), std::move(down));
}

double SpinorState::norm_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < up_.size(); ++i) s += std::norm(up_[i]) + std::norm(down_[i]);
  return s;
}

Eigen::VectorXcd SpinorState::flatten() const {
  Eigen::VectorXcd v(2 * up_.size());
  for (std::size_t i = 0; i < up_.size(); ++i) {
    v(2 * i) = up_[i];
    v(2 * i + 1) = down_[i];
  }
  return v;
}

SpinorState SpinorState::from_flat(SiteWindow window, const Eigen::VectorXcd& flat) {
  if (static_cast<std::size_t>(flat.size()) != 2 * window.size()) {
    throw DomainError("flat vector does not match window size");
  }
  std::vector<Complex> up(window.size()), down(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    up[i] = flat(2 * i);
    down[i] = flat(2 * i + 1);
  }
  return SpinorState(window, std::move(up), std::move(down));
}

DensityState::DensityState(SiteWindow window, Eigen::MatrixXcd matrix)
    : window_(window), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(2 * window_.size());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw DomainError("density matrix does not match window size");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kNormTolerance) {
    throw DomainError("density matrix trace differs from 1");
  }
}

DensityState DensityState::from_pure(const SpinorState& state) {
  const Eigen::VectorXcd v = state.flatten();
  return DensityState(state.window(), v * v.adjoint());
}

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double MomentumSpinor::parseval_norm() const {
  if (k_grid.empty()) return 0.0;
  const double dk = 2.0 * std::numbers::pi / static_cast<double>(k_grid.size());
  double s = 0.0;
  for (std::size_t j = 0; j < k_grid.size(); ++j) s += std::norm(up[j]) + std::norm(down[j]);
  return s * dk / (2.0 * std::numbers::pi);
}

MomentumSpinor momentum_transform(const SpinorState& state) {
  const auto& w = state.window();
  const std::size_t L = w.size();
  MomentumSpinor out{w, std::vector<double>(L), std::vector<Complex>(L), std::vector<Complex>(L)};
  for (std::size_t j = 0; j < L; ++j) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(L) -
                     std::numbers::pi;
    out.k_grid[j] = k;
    Complex u{}, d{};
    for (std::size_t i = 0; i < L; ++i) {
      const Complex phase = std::polar(1.0, -k * w.site(i));
      u += state.up()[i] * phase;
      d += state.down()[i] * phase;
    }
    out.up[j] = u;
    out.down[j] = d;
  }
  return out;
}

SpinorState inverse_momentum_transform(const MomentumSpinor& momentum) {
  const auto& w = momentum.window;
  const std::size_t L = w.size();
  if (momentum.k_grid.size() != L) throw DomainError("momentum grid does not match window");
  std::vector<Complex> up(L), down(L);
  for (std::size_t i = 0; i < L; ++i) {
    Complex u{}, d{};
    for (std::size_t j = 0; j < L; ++j) {
      const Complex phase = std::polar(1.0, momentum.k_grid[j] * w.site(i));
      u += momentum.up[j] * phase;
      d += momentum.down[j] * phase;
    }
    up[i] = u / static_cast<double>(L);
    down[i] = d / static_cast<double>(L);
  }
  return SpinorState(w, std::move(up), std::move(down));
}

double purity(const DensityState& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().cwiseAbs2().sum();
}

}  // namespace eqwalk
