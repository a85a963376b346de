#include "eqwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "eqwalk/errors.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZoneSlack = 1e-12;

Eigen::MatrixXcd bloch_matrix_unchecked(const RationalPhase& rational, double kappa,
                                        double theta) {
  const int m = static_cast<int>(rational.m());
  const WalkParams params(rational.phi(), theta);
  // Window [-1, m] holds a unit-cell site and both of its neighbours after one step.
  const SiteWindow window(-1, m);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < 2; ++s) {
      const Spinor basis = s == 0 ? Spinor{1.0, 0.0} : Spinor{0.0, 1.0};
      const SpinorState image = step(SpinorState::localized(r, basis, window), params);
      for (int x = -1; x <= m; ++x) {
        const int cell = x < 0 ? -1 : x / m;
        const int rr = x - cell * m;
        const Complex hop = std::polar(1.0, -kappa * m * cell);
        out(2 * rr, 2 * r + s) += image.up_at(x) * hop;
        out(2 * rr + 1, 2 * r + s) += image.down_at(x) * hop;
      }
    }
  }
  return out;
}

struct Eigensystem {
  std::vector<double> phases;
  Eigen::MatrixXcd vectors;
};

Eigensystem diagonalize(const Eigen::MatrixXcd& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u);
  Eigensystem out{std::vector<double>(static_cast<std::size_t>(u.rows())), solver.eigenvectors()};
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    out.phases[static_cast<std::size_t>(i)] = eigenphase(solver.eigenvalues()(i));
    out.vectors.col(i).normalize();
  }
  return out;
}

// assignment[b] = column of `next` that continues column b of `prev`.
// Greedy on descending overlap magnitude, so the result is always a permutation.
std::vector<Eigen::Index> match_by_overlap(const Eigen::MatrixXcd& prev,
                                           const Eigen::MatrixXcd& next) {
  const Eigen::Index n = prev.cols();
  const Eigen::MatrixXd overlap = (prev.adjoint() * next).cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n * n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return overlap(a / n, a % n) > overlap(b / n, b % n);
  });
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  for (const Eigen::Index idx : order) {
    const Eigen::Index b = idx / n;
    const Eigen::Index c = idx % n;
    if (assignment[static_cast<std::size_t>(b)] >= 0 || taken[static_cast<std::size_t>(c)]) continue;
    assignment[static_cast<std::size_t>(b)] = c;
    taken[static_cast<std::size_t>(c)] = true;
  }
  return assignment;
}

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace

RationalPhase::RationalPhase(long long n, long long m) {
  if (m == 0) throw DomainError("rational phase denominator must be non-zero");
  if (m < 0) {
    n = -n;
    m = -m;
  }
  const long long g = std::gcd(n, m);
  n_ = n / g;
  m_ = m / g;
}

double RationalPhase::phi() const {
  return 2.0 * kPi * static_cast<double>(n_) / static_cast<double>(m_);
}

double eigenphase(Complex eigenvalue) {
  const double a = std::arg(eigenvalue);
  return a <= -kPi ? kPi : a;
}

Eigen::Matrix2cd free_step_matrix(double k, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex em = std::polar(1.0, -k);
  const Complex ep = std::polar(1.0, k);
  Eigen::Matrix2cd w;
  w << em * c, -em * s, ep * s, ep * c;
  return w;
}

std::pair<double, double> dispersion_free(double k, double theta) {
  const double c = std::clamp(std::cos(theta) * std::cos(k), -1.0, 1.0);
  const double omega = std::acos(c);
  return {omega, -omega};
}

double group_velocity(double k, double theta, Band band) {
  const double omega = dispersion_free(k, theta).first;
  const double sin_omega = std::sin(omega);
  if (std::abs(sin_omega) < 1e-12) {
    throw SingularityError("group velocity undefined where the bands touch");
  }
  const double v = std::cos(theta) * std::sin(k) / sin_omega;
  return band == Band::Plus ? v : -v;
}

Eigen::MatrixXcd bloch_matrix(const RationalPhase& rational, double kappa, double theta) {
  const double edge = kPi / static_cast<double>(rational.m());
  if (!(kappa > -edge + kZoneSlack && kappa <= edge + kZoneSlack)) {
    throw DomainError("kappa " + std::to_string(kappa) + " outside reduced zone");
  }
  return bloch_matrix_unchecked(rational, kappa, theta);
}

BandStructure band_structure(const RationalPhase& rational, double theta, int grid_points) {
  if (grid_points < 2) throw DomainError("band structure needs at least 2 grid points");
  const double m = static_cast<double>(rational.m());
  const double spacing = 2.0 * kPi / (m * grid_points);
  BandStructure out{rational, theta, {}, {}, {}};
  for (int j = 0; j < grid_points; ++j) {
    const double kappa = -kPi / m + (j + 1) * spacing;
    Eigensystem es = diagonalize(bloch_matrix_unchecked(rational, kappa, theta));
    const std::size_t nb = es.phases.size();
    std::vector<Eigen::Index> perm(nb);
    if (j == 0) {
      std::iota(perm.begin(), perm.end(), 0);
      std::sort(perm.begin(), perm.end(),
                [&](Eigen::Index a, Eigen::Index b) { return es.phases[a] < es.phases[b]; });
    } else {
      perm = match_by_overlap(out.eigenvectors.back(), es.vectors);
    }
    std::vector<double> phases(nb);
    Eigen::MatrixXcd vectors(es.vectors.rows(), es.vectors.cols());
    for (std::size_t b = 0; b < nb; ++b) {
      phases[b] = es.phases[static_cast<std::size_t>(perm[b])];
      vectors.col(static_cast<Eigen::Index>(b)) = es.vectors.col(perm[b]);
    }
    out.kappa_grid.push_back(kappa);
    out.eigenphases.push_back(std::move(phases));
    out.eigenvectors.push_back(std::move(vectors));
  }
  return out;
}

std::vector<double> band_flatness(const BandStructure& bands) {
  std::vector<double> out(bands.band_count(), 0.0);
  if (bands.eigenphases.empty()) return out;
  for (std::size_t b = 0; b < out.size(); ++b) {
    double current = bands.eigenphases[0][b];
    double lo = current;
    double hi = current;
    for (std::size_t j = 1; j < bands.eigenphases.size(); ++j) {
      current += wrap_phase(bands.eigenphases[j][b] - bands.eigenphases[j - 1][b]);
      lo = std::min(lo, current);
      hi = std::max(hi, current);
    }
    out[b] = hi - lo;
  }
  return out;
}

BandTransferReport band_transfer(double k, double theta, double phi) {
  auto split = [](const Eigen::Matrix2cd& w) {
    Eigensystem es = diagonalize(w);
    // + band: eigenphase in (0, pi)
    const Eigen::Index plus = es.phases[0] > es.phases[1] ? 0 : 1;
    return std::pair<Eigen::Vector2cd, Eigen::Vector2cd>{es.vectors.col(plus),
                                                         es.vectors.col(1 - plus)};
  };
  const Eigen::Matrix2cd here = free_step_matrix(k, theta);
  const auto [plus, minus] = split(here);
  const Eigen::Vector2cd moved = here * plus;  // field only relabels k -> k + phi
  const auto [plus_after, minus_after] = split(free_step_matrix(k + phi, theta));
  BandTransferReport report{};
  report.k = k;
  report.populations_before = {std::norm(plus.dot(plus)), std::norm(minus.dot(plus))};
  report.populations_after = {std::norm(plus_after.dot(moved)), std::norm(minus_after.dot(moved))};
  return report;
}

std::vector<double> velocity_multiset(const RationalPhase& rational, double theta,
                                      int grid_points) {
  if (grid_points < 2) throw DomainError("velocity multiset needs at least 2 grid points");
  const double m = static_cast<double>(rational.m());
  const int reduced_points = std::max(2, grid_points / static_cast<int>(rational.m()));
  const double h = 2.0 * kPi / (m * reduced_points);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(reduced_points) * 2 * rational.m());
  for (int j = 0; j < reduced_points; ++j) {
    const double kappa = -kPi / m + (j + 0.5) * h;
    const Eigensystem centre = diagonalize(bloch_matrix_unchecked(rational, kappa, theta));
    const Eigensystem ahead = diagonalize(bloch_matrix_unchecked(rational, kappa + h, theta));
    const Eigensystem behind = diagonalize(bloch_matrix_unchecked(rational, kappa - h, theta));
    const auto to_ahead = match_by_overlap(centre.vectors, ahead.vectors);
    const auto to_behind = match_by_overlap(centre.vectors, behind.vectors);
    for (std::size_t b = 0; b < centre.phases.size(); ++b) {
      const double rise = wrap_phase(ahead.phases[static_cast<std::size_t>(to_ahead[b])] -
                                     behind.phases[static_cast<std::size_t>(to_behind[b])]);
      out.push_back(rise / (2.0 * h));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eqwalk
