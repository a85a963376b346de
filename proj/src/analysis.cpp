#include "eqwalk/analysis.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

constexpr double kFitFloor = 1e-12;

void require_same_window(const Distribution& a, const Distribution& b) {
  if (!(a.window == b.window)) throw DomainError("distributions live on different windows");
}

}  // namespace

double Distribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

Distribution position_distribution(const SpinorState& state, int step) {
  Distribution out{state.window(), std::vector<double>(state.window().size()), step};
  for (std::size_t i = 0; i < out.p.size(); ++i) {
    out.p[i] = std::norm(state.up()[i]) + std::norm(state.down()[i]);
  }
  return out;
}

Distribution position_distribution(const DensityState& rho, int step) {
  Distribution out{rho.window(), std::vector<double>(rho.window().size()), step};
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < out.p.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(2 * i);
    out.p[i] = m(r, r).real() + m(r + 1, r + 1).real();
  }
  return out;
}

double rms_width(const Distribution& dist) {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    const double x = dist.window.site(i);
    s += x * x * dist.p[i];
  }
  return std::sqrt(s);
}

double return_probability(const Distribution& dist, int origin) {
  if (!dist.window.contains(origin)) throw DomainError("origin outside distribution window");
  return dist.p[dist.window.index(origin)];
}

std::vector<int> revival_peaks(std::span<const double> return_series) {
  std::vector<int> peaks;
  const auto last = static_cast<std::ptrdiff_t>(return_series.size()) - 1;
  for (std::ptrdiff_t t = 2; t <= last; ++t) {
    const double v = return_series[static_cast<std::size_t>(t)];
    if (!(v > return_series[static_cast<std::size_t>(t - 2)])) continue;
    if (t + 2 <= last && !(v > return_series[static_cast<std::size_t>(t + 2)])) continue;
    peaks.push_back(static_cast<int>(t));
  }
  return peaks;
}

Distribution time_averaged_distribution(std::span<const Distribution> dists) {
  if (dists.empty()) throw DomainError("cannot average an empty list of distributions");
  Distribution out{dists.front().window, std::vector<double>(dists.front().p.size(), 0.0),
                   dists.front().step};
  for (const auto& d : dists) {
    require_same_window(out, d);
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += d.p[i];
    out.step = std::max(out.step, d.step);
  }
  const double n = static_cast<double>(dists.size());
  for (double& v : out.p) v /= n;
  return out;
}

constexpr double kSlopeFloor = 1e-12;

ExpFitResult fit_two_sided_exponential(const Distribution& dist) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    const double w = dist.p[i];
    if (!(w > kFitFloor)) continue;
    const double x = std::abs(dist.window.site(i));
    const double y = std::log(w);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  if (used < 3) throw FitError("exponential fit needs at least 3 sites above the floor");
  const double x_mean = sx / sw;
  const double y_mean = sy / sw;
  const double sxx_c = sxx - sw * x_mean * x_mean;
  if (!(sxx_c > 0.0)) throw FitError("exponential fit needs at least two distinct |x| values");
  const double slope = (sxy - sw * x_mean * y_mean) / sxx_c;
  const double intercept = y_mean - slope * x_mean;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    const double w = dist.p[i];
    if (!(w > kFitFloor)) continue;
    const double x = std::abs(dist.window.site(i));
    const double y = std::log(w);
    const double r = y - (intercept + slope * x);
    ss_res += w * r * r;
    ss_tot += w * (y - y_mean) * (y - y_mean);
  }
  // A flat profile has no variance to explain.
  const double r2 = ss_tot > 1e-20 * sw ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
  const bool decaying = slope < -kSlopeFloor;
  return ExpFitResult{decaying ? -1.0 / slope : std::numeric_limits<double>::infinity(),
                      std::exp(intercept), r2, decaying};
}

std::vector<double> width_series(const WalkParams& params, int t_max) {
  if (t_max < 1) throw DomainError("width series needs t_max >= 1");
  SpinorState state = SpinorState::localized(0, Spinor{}, SiteWindow::for_walk(0, t_max));
  std::vector<double> widths;
  widths.reserve(static_cast<std::size_t>(t_max) + 1);
  widths.push_back(rms_width(position_distribution(state, 0)));
  for (int t = 1; t <= t_max; ++t) {
    state = step(state, params);
    widths.push_back(rms_width(position_distribution(state, t)));
  }
  return widths;
}

double tv_distance(const Distribution& a, const Distribution& b) {
  require_same_window(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.p.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

DiscriminationReport distinguishing_steps(double phi1, double phi2, double threshold, int cap,
                                          double theta) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("discrimination threshold must lie in (0, 1)");
  }
  double delta = std::remainder(reduce_angle(phi1) - reduce_angle(phi2), 2.0 * std::numbers::pi);
  delta = std::abs(delta);
  if (delta < 1e-15) throw DomainError("fields are identical modulo 2*pi");

  DiscriminationReport report{};
  // The small offset keeps exact reciprocals such as 1/0.01 from rounding up.
  report.heuristic_steps = static_cast<long long>(std::ceil(1.0 / delta - 1e-9));
  if (cap <= 0) {
    cap = static_cast<int>(std::min<long long>(std::max<long long>(50, 10 * report.heuristic_steps),
                                               100000));
  }

  const WalkParams pa(phi1, theta);
  const WalkParams pb(phi2, theta);
  const SiteWindow window = SiteWindow::for_walk(0, cap);
  SpinorState a = SpinorState::localized(0, Spinor{}, window);
  SpinorState b = a;
  report.tv_curve.reserve(static_cast<std::size_t>(cap) + 1);
  report.tv_curve.push_back(0.0);
  for (int t = 1; t <= cap; ++t) {
    a = step(a, pa);
    b = step(b, pb);
    const double tv = tv_distance(position_distribution(a, t), position_distribution(b, t));
    report.tv_curve.push_back(tv);
    if (!report.empirical_steps && tv >= threshold) report.empirical_steps = t;
  }
  return report;
}

std::vector<Fraction> convergents(double x, int depth) {
  if (depth < 1) throw DomainError("convergent depth must be at least 1");
  if (!std::isfinite(x)) throw DomainError("cannot expand a non-finite value");
  std::vector<Fraction> out;
  // p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
  long long p_prev = 1, q_prev = 0;
  long long p_prev2 = 0, q_prev2 = 1;
  long double rest = x;
  constexpr long double kLimit = 4.0e18L;
  for (int i = 0; i < depth; ++i) {
    const long double a = std::floor(rest);
    const long double p = a * p_prev + p_prev2;
    const long double q = a * q_prev + q_prev2;
    if (std::abs(p) > kLimit || q > kLimit) break;
    const auto pi = static_cast<long long>(p);
    const auto qi = static_cast<long long>(q);
    out.push_back(Fraction{pi, qi});
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = pi;
    q_prev = qi;
    const long double frac = rest - a;
    // Exhausted: the convergent reproduces x to working precision.
    if (frac < 1e-12L || std::abs(static_cast<long double>(x) - p / q) < 1e-15L * std::abs(x)) break;
    rest = 1.0L / frac;
  }
  return out;
}

}  // namespace eqwalk
