#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "eqwalk/analysis.hpp"
#include "eqwalk/errors.hpp"
#include "eqwalk/walk.hpp"

using namespace eqwalk;
constexpr double kPi = std::numbers::pi;

namespace {

SpinorState random_state(std::mt19937_64& rng, SiteWindow w, int support) {
  std::normal_distribution<double> g;
  std::vector<Complex> up(w.size()), down(w.size());
  double n2 = 0;
  // Random amplitudes on [-support, support] only.
  for (int x = -support; x <= support; ++x) {
    const auto i = w.index(x);
    up[i] = {g(rng), g(rng)};
    down[i] = {g(rng), g(rng)};
    n2 += std::norm(up[i]) + std::norm(down[i]);
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    up[i] /= std::sqrt(n2);
    down[i] /= std::sqrt(n2);
  }
  return SpinorState(w, std::move(up), std::move(down));
}

double max_diff(const SpinorState& a, const SpinorState& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.up().size(); ++i) {
    d = std::max({d, std::abs(a.up()[i] - b.up()[i]), std::abs(a.down()[i] - b.down()[i])});
  }
  return d;
}

}  // namespace

TEST_CASE("walk params") {
  const WalkParams p(2.0 * kPi + 0.5, kPi / 4, 0.1);
  CHECK(p.phi() == doctest::Approx(0.5));
  CHECK(p.phi_raw() == 2.0 * kPi + 0.5);
  CHECK(WalkParams(-0.5).phi() == doctest::Approx(2.0 * kPi - 0.5));
  CHECK(WalkParams(2.0 * kPi).phi() == 0.0);
  CHECK_THROWS_AS(WalkParams(0.0, kPi / 4, 1.5), DomainError);
  CHECK_THROWS_AS(WalkParams(0.0, kPi / 4, -0.1), DomainError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(WalkParams{inf}, DomainError);
}

TEST_CASE("coin") {
  const SiteWindow w(-2, 2);
  const auto up = SpinorState::localized(0, {1.0, 0.0}, w);
  const auto down = SpinorState::localized(0, {0.0, 1.0}, w);
  CHECK(max_diff(apply_coin(up, 0.0), up) == 0.0);
  const auto a = apply_coin(up, kPi / 4);
  CHECK(a.up_at(0).real() == doctest::Approx(0.70710678));
  CHECK(a.down_at(0).real() == doctest::Approx(0.70710678));
  const auto b = apply_coin(down, kPi / 4);
  CHECK(b.up_at(0).real() == doctest::Approx(-0.70710678));
  CHECK(b.down_at(0).real() == doctest::Approx(0.70710678));
}

TEST_CASE("shift convention and overflow") {
  const SiteWindow w(-2, 2);
  const auto up = apply_shift(SpinorState::localized(0, {1.0, 0.0}, w));
  CHECK(up.up_at(1) == Complex(1.0));
  const auto down = apply_shift(SpinorState::localized(0, {0.0, 1.0}, w));
  CHECK(down.down_at(-1) == Complex(1.0));
  const double r = 1.0 / std::sqrt(2.0);
  const auto both = apply_shift(SpinorState::localized(0, {r, r}, w));
  CHECK(both.up_at(1) == Complex(r));
  CHECK(both.down_at(-1) == Complex(r));
  CHECK(both.norm_squared() == doctest::Approx(1.0));

  CHECK_THROWS_AS(apply_shift(SpinorState::localized(2, {1.0, 0.0}, w)), WindowOverflow);
  CHECK_THROWS_AS(apply_shift(SpinorState::localized(-2, {0.0, 1.0}, w)), WindowOverflow);
  // Moving away from the edge is fine.
  CHECK_NOTHROW(apply_shift(SpinorState::localized(2, {0.0, 1.0}, w)));
}

TEST_CASE("field phases") {
  const SiteWindow w(-4, 4);
  std::mt19937_64 rng(3);
  const auto s = random_state(rng, w, 4);
  CHECK(max_diff(apply_field(s, 2.0 * kPi), s) < 1e-14);
  const auto pi = apply_field(s, kPi);
  for (int x = -4; x <= 4; ++x) {
    const double sign = (x % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(pi.up_at(x) - sign * s.up_at(x)) < 1e-14);
  }
  const auto q = apply_field(SpinorState::localized(3, {1.0, 0.0}, w), kPi / 2);
  CHECK(std::abs(q.up_at(3) - Complex(0, -1)) < 1e-15);
}

TEST_CASE("step examples") {
  const WalkParams free(0.0);
  const auto s0 = SpinorState::localized(0, {1.0, 0.0}, SiteWindow::for_walk(0, 2));
  const auto s1 = step(s0, free);
  const auto d1 = position_distribution(s1);
  CHECK(d1.at(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d1.at(-1) == doctest::Approx(0.5).epsilon(1e-15));
  const auto d2 = position_distribution(step(s1, free));
  CHECK(std::abs(d2.at(2) - 0.25) < 1e-12);
  CHECK(std::abs(d2.at(0) - 0.5) < 1e-12);
  CHECK(std::abs(d2.at(-2) - 0.25) < 1e-12);

  std::mt19937_64 rng(11);
  const SiteWindow w(-6, 6);
  const auto r = random_state(rng, w, 3);
  CHECK(max_diff(step(r, WalkParams(2.0 * kPi)), step(r, WalkParams(0.0))) == 0.0);
}

TEST_CASE("step equals dense F S C product") {
  std::mt19937_64 rng(5);
  for (double phi : {0.0, 0.3, kPi / 4, kPi, 2.0 * kPi / 1.618033988749895}) {
    for (double theta : {kPi / 4, 0.4, 1.1}) {
      const SiteWindow w(-5, 5);
      const auto s = random_state(rng, w, 4);
      const Eigen::VectorXcd got = step(s, WalkParams(phi, theta)).flatten();
      const Eigen::VectorXcd want = oracle::step_matrix(-5, 5, phi, theta) * s.flatten();
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("evolve") {
  const auto s = SpinorState::localized(0, {1.0, 0.0}, SiteWindow(-1, 1));
  const auto traj0 = evolve(s, WalkParams(0.3), 0);
  REQUIRE(traj0.size() == 1);
  CHECK(max_diff(traj0[0], s) == 0.0);
  CHECK_THROWS_AS(evolve(s, WalkParams(0.3), 2), WindowOverflow);
}

TEST_CASE("unitarity over 100 steps and support containment") {
  std::mt19937_64 rng(17);
  const int t = 100;
  const SiteWindow w = SiteWindow::for_walk(0, t + 3);
  for (int trial = 0; trial < 5; ++trial) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const WalkParams params(u(rng), u(rng));
    const auto traj = evolve(random_state(rng, w, 3), params, t);
    for (int k = 0; k <= t; ++k) {
      CHECK(std::abs(traj[static_cast<std::size_t>(k)].norm_squared() - 1.0) < 1e-12);
    }
  }
  const auto traj = evolve(SpinorState::localized(0, {1.0, 0.0}, SiteWindow(-40, 40)),
                           WalkParams(1.0), 30);
  for (int k = 0; k <= 30; ++k) {
    const auto& st = traj[static_cast<std::size_t>(k)];
    for (int x = -40; x <= 40; ++x) {
      if (std::abs(x) > k) {
        CHECK(st.up_at(x) == Complex{});
        CHECK(st.down_at(x) == Complex{});
      }
    }
  }
}

TEST_CASE("global phase equivalence phi vs phi + 2 pi") {
  const auto s = SpinorState::localized(0, {1.0, 0.0}, SiteWindow::for_walk(0, 20));
  for (double phi : {0.0, kPi / 2, kPi, 2.0 * kPi / 8}) {
    const WalkParams a(phi), b(phi + 2.0 * kPi);
    const auto ta = evolve(s, a, 20);
    const auto tb = evolve(s, b, 20);
    if (a.phi() == b.phi()) {
      CHECK(max_diff(ta.back(), tb.back()) == 0.0);
    } else {
      // phi + 2 pi rounded to a neighbouring double; agreement is then to rounding.
      CHECK(max_diff(ta.back(), tb.back()) < 1e-12);
    }
  }
}

TEST_CASE("dephase channel") {
  const SiteWindow w(-3, 3);
  std::mt19937_64 rng(23);
  const auto rho = DensityState::from_pure(random_state(rng, w, 3));
  const auto same = dephase(rho, 0.0);
  CHECK((same.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
  for (double p : {0.1, 0.5, 1.0}) {
    const auto out = dephase(rho, p);
    CHECK((out.matrix() - oracle::dephase(rho.matrix(), p)).cwiseAbs().maxCoeff() < 1e-15);
    const auto before = position_distribution(rho);
    const auto after = position_distribution(out);
    for (std::size_t i = 0; i < before.p.size(); ++i) {
      CHECK(std::abs(before.p[i] - after.p[i]) < 1e-15);
    }
    CHECK(out.min_eigenvalue() >= -1e-10);
    CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-12);
  }
  CHECK_THROWS_AS(dephase(rho, 1.01), DomainError);
  CHECK_THROWS_AS(dephase(rho, -0.01), DomainError);
}

TEST_CASE("density evolution against Kraus-form oracle") {
  const int t = 8;
  const double phi = 2.0 * kPi / 8;
  const SiteWindow w = SiteWindow::for_walk(0, t);
  const auto rho0 = DensityState::from_pure(SpinorState::localized(0, {1.0, 0.0}, w));
  for (double p : {0.0, 0.1, 1.0}) {
    const auto traj = evolve_density(rho0, WalkParams(phi, kPi / 4, p), t);
    const auto want = oracle::evolve_density(rho0.matrix(),
                                             oracle::step_matrix(-t, t, phi, kPi / 4), p, t);
    CHECK((traj.back().matrix() - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(purity(traj.back()) == doctest::Approx(want.cwiseAbs2().sum()).epsilon(1e-12));
  }
}

TEST_CASE("density evolution with p = 0 matches pure evolution") {
  const int t = 12;
  const WalkParams params(1.3, 0.7);
  const auto s = SpinorState::localized(0, {0.6, Complex(0, 0.8)}, SiteWindow::for_walk(0, t));
  const auto pure = evolve(s, params, t);
  const auto mixed = evolve_density(DensityState::from_pure(s), params, t);
  for (int k = 0; k <= t; ++k) {
    const auto a = position_distribution(pure[static_cast<std::size_t>(k)]);
    const auto b = position_distribution(mixed[static_cast<std::size_t>(k)]);
    for (std::size_t i = 0; i < a.p.size(); ++i) CHECK(std::abs(a.p[i] - b.p[i]) < 1e-12);
  }
}

TEST_CASE("trace preservation over 20 dephased steps") {
  const int t = 20;
  const auto rho0 =
      DensityState::from_pure(SpinorState::localized(0, {1.0, 0.0}, SiteWindow::for_walk(0, t)));
  const auto traj = evolve_density(rho0, WalkParams(0.9, kPi / 4, 0.1), t);
  CHECK(std::abs(traj.back().trace() - Complex(1.0)) < 1e-12);
  CHECK(traj.back().min_eigenvalue() >= -1e-10);
}

TEST_CASE("full dephasing gives the classical binomial walk") {
  for (int t : {1, 5, 10, 16}) {
    const auto rho0 = DensityState::from_pure(
        SpinorState::localized(0, {1.0, 0.0}, SiteWindow::for_walk(0, t)));
    const auto traj = evolve_density(rho0, WalkParams(0.77, kPi / 4, 1.0), t);
    const auto got = position_distribution(traj.back());
    const auto want = oracle::binomial_walk(t);
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got.p[i] - want[i]) < 1e-12);
  }
  // Closed form at t = 10 for even x: C(10, (10 + x) / 2) / 2^10.
  const auto p10 = oracle::binomial_walk(10);
  CHECK(p10[10] == doctest::Approx(252.0 / 1024.0));
  CHECK(p10[12] == doctest::Approx(210.0 / 1024.0));
}
