#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eqwalk/lattice.hpp"
#include "eqwalk/walk.hpp"

namespace eqwalk {

/// Position probabilities P(x) at a given step.
struct Distribution {
  SiteWindow window;
  std::vector<double> p;
  int step = 0;

  double at(int x) const { return window.contains(x) ? p[window.index(x)] : 0.0; }
  double total() const;
};

Distribution position_distribution(const SpinorState& state, int step = 0);
Distribution position_distribution(const DensityState& rho, int step = 0);

/// sqrt(sum x^2 p(x)), measured from the preparation site x = 0.
double rms_width(const Distribution& dist);

/// p(origin); throws DomainError if origin is outside the window.
double return_probability(const Distribution& dist, int origin = 0);

/// Steps t >= 2 where a return-probability series (indexed by step) has a strict
/// local maximum against t - 2 and t + 2; the last step only needs to beat t - 2.
/// Neighbours are two apart because a walk started on one site has zero return
/// probability at every odd step.
std::vector<int> revival_peaks(std::span<const double> return_series);

/// Site-wise mean of distributions sharing one window. The step of the result
/// is the largest input step.
Distribution time_averaged_distribution(std::span<const Distribution> dists);

struct ExpFitResult {
  double xi;
  double amplitude;
  double r_squared;
  /// False when the fitted slope is not negative (no decay, xi is infinite).
  bool decaying;
};

/// Weighted least squares of ln p(x) against |x| with weights p(x), over sites
/// with p(x) > 1e-12. Model: p(x) = amplitude * exp(-|x| / xi).
ExpFitResult fit_two_sided_exponential(const Distribution& dist);

/// rms_width at steps 0..t_max of a walk started in |0, up>.
std::vector<double> width_series(const WalkParams& params, int t_max);

/// Half the L1 distance; throws DomainError on window mismatch.
double tv_distance(const Distribution& a, const Distribution& b);

inline constexpr double kDefaultDiscriminationThreshold = 0.2;

struct DiscriminationReport {
  long long heuristic_steps;
  std::optional<int> empirical_steps;
  /// tv_curve[t] compares the two walks after t steps, t = 0..cap.
  std::vector<double> tv_curve;
};

/// Compares walks from |0, up> under two fields. heuristic_steps = ceil(1/|dphi|)
/// with dphi the difference reduced into (-pi, pi]; empirical_steps is the first
/// step whose TV distance reaches the threshold, searched up to `cap` steps
/// (cap <= 0 selects max(50, 10 * heuristic_steps)).
DiscriminationReport distinguishing_steps(double phi1, double phi2,
                                          double threshold = kDefaultDiscriminationThreshold,
                                          int cap = 0,
                                          double theta = std::numbers::pi / 4);

struct Fraction {
  long long numerator;
  long long denominator;

  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Continued-fraction convergents p_i/q_i of x, starting from floor(x)/1.
/// Stops early when x is exhausted or the next convergent would overflow.
std::vector<Fraction> convergents(double x, int depth);

}  // namespace eqwalk
