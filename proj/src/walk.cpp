#include "eqwalk/walk.hpp"

#include <cmath>
#include <string>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unitary step on an interleaved column (index 2*i + spin), with the field
// phases precomputed once per density step.
class ColumnStepper {
 public:
  ColumnStepper(const SiteWindow& window, const WalkParams& params)
      : c_(std::cos(params.theta())), s_(std::sin(params.theta())), phases_(window.size()) {
    for (std::size_t i = 0; i < window.size(); ++i) {
      phases_[i] = std::polar(1.0, params.phi() * window.site(i));
    }
  }

  void apply(Eigen::Ref<Eigen::VectorXcd> v) const {
    const auto L = static_cast<Eigen::Index>(phases_.size());
    for (Eigen::Index i = 0; i < L; ++i) {
      const Complex u = v(2 * i);
      const Complex d = v(2 * i + 1);
      v(2 * i) = c_ * u - s_ * d;
      v(2 * i + 1) = s_ * u + c_ * d;
    }
    if (v(2 * L - 2) != Complex{} || v(1) != Complex{}) {
      throw WindowOverflow("density step would move amplitude outside window");
    }
    for (Eigen::Index i = L - 1; i > 0; --i) v(2 * i) = v(2 * i - 2);
    v(0) = Complex{};
    for (Eigen::Index i = 0; i + 1 < L; ++i) v(2 * i + 1) = v(2 * i + 3);
    v(2 * L - 1) = Complex{};
    for (Eigen::Index i = 0; i < L; ++i) {
      v(2 * i) *= phases_[static_cast<std::size_t>(i)];
      v(2 * i + 1) *= phases_[static_cast<std::size_t>(i)];
    }
  }

 private:
  double c_;
  double s_;
  std::vector<Complex> phases_;
};

}  // namespace

double reduce_angle(double radians) {
  if (!std::isfinite(radians)) throw DomainError("angle must be finite");
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

WalkParams::WalkParams(double phi, double theta, double dephase_p)
    : phi_raw_(phi), phi_(reduce_angle(phi)), theta_(reduce_angle(theta)), dephase_p_(dephase_p) {
  if (!(dephase_p >= 0.0 && dephase_p <= 1.0)) {
    throw DomainError("dephasing probability must lie in [0, 1]");
  }
}

SpinorState apply_coin(const SpinorState& state, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<Complex> up(state.up().size()), down(state.down().size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    const Complex u = state.up()[i];
    const Complex d = state.down()[i];
    up[i] = c * u - s * d;
    down[i] = s * u + c * d;
  }
  return SpinorState(state.window(), std::move(up), std::move(down));
}

SpinorState apply_shift(const SpinorState& state) {
  const std::size_t L = state.window().size();
  if (state.up()[L - 1] != Complex{} || state.down()[0] != Complex{}) {
    throw WindowOverflow("shift would move amplitude outside window [" +
                         std::to_string(state.window().x_min()) + ", " +
                         std::to_string(state.window().x_max()) + "]");
  }
  std::vector<Complex> up(L), down(L);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    up[i + 1] = state.up()[i];
    down[i] = state.down()[i + 1];
  }
  return SpinorState(state.window(), std::move(up), std::move(down));
}

SpinorState apply_field(const SpinorState& state, double phi) {
  const auto& w = state.window();
  std::vector<Complex> up(state.up()), down(state.down());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Complex phase = std::polar(1.0, phi * w.site(i));
    up[i] *= phase;
    down[i] *= phase;
  }
  return SpinorState(w, std::move(up), std::move(down));
}

SpinorState step(const SpinorState& state, const WalkParams& params) {
  return apply_field(apply_shift(apply_coin(state, params.theta())), params.phi());
}

std::vector<SpinorState> evolve(const SpinorState& state, const WalkParams& params, int steps) {
  if (steps < 0) throw DomainError("negative step count");
  std::vector<SpinorState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(state);
  for (int t = 0; t < steps; ++t) out.push_back(step(out.back(), params));
  return out;
}

DensityState dephase(const DensityState& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dephasing probability must lie in [0, 1]");
  Eigen::MatrixXcd m = rho.matrix();
  // (1 - p/2) rho + (p/2) Z rho Z: spin coherences scale by 1 - p, populations untouched.
  const double off = 1.0 - p;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if ((r & 1) != (c & 1)) m(r, c) *= off;
    }
  }
  return DensityState(rho.window(), std::move(m));
}

DensityState step_density(const DensityState& rho, const WalkParams& params) {
  const ColumnStepper stepper(rho.window(), params);
  // W rho W^dagger = W (W rho)^dagger for Hermitian rho
  Eigen::MatrixXcd m = rho.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c) stepper.apply(m.col(c));
  m.adjointInPlace();
  for (Eigen::Index c = 0; c < m.cols(); ++c) stepper.apply(m.col(c));
  // Restore exact Hermiticity lost to rounding.
  Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  DensityState next(rho.window(), std::move(herm));
  return params.dephase_p() > 0.0 ? dephase(next, params.dephase_p()) : next;
}

std::vector<DensityState> evolve_density(const DensityState& rho, const WalkParams& params,
                                         int steps) {
  if (steps < 0) throw DomainError("negative step count");
  std::vector<DensityState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(rho);
  for (int t = 0; t < steps; ++t) out.push_back(step_density(out.back(), params));
  return out;
}

}  // namespace eqwalk
