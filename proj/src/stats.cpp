#include "eqwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "eqwalk/errors.hpp"

namespace eqwalk {

namespace {

constexpr double kBisectionTolerance = 1e-9;
constexpr int kBisectionMaxIterations = 200;

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_binomial_pmf(long long i, long long n, double p) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
         std::lgamma(static_cast<double>(n - i) + 1.0) + static_cast<double>(i) * std::log(p) +
         static_cast<double>(n - i) * std::log1p(-p);
}

// Sum of pmf from i = from moving by dir (+1 or -1) to the end of the support.
// Only called on the side away from the mode, where terms shrink monotonically.
double tail_sum(long long from, long long n, double p, int dir) {
  double term = std::exp(log_binomial_pmf(from, n, p));
  double sum = term;
  const double odds = p / (1.0 - p);
  for (long long i = from; dir > 0 ? i < n : i > 0; i += dir) {
    if (dir > 0) {
      term *= odds * static_cast<double>(n - i) / static_cast<double>(i + 1);
    } else {
      term /= odds * static_cast<double>(n - i + 1) / static_cast<double>(i);
    }
    sum += term;
    if (term <= sum * 1e-17) break;
  }
  return sum;
}

template <typename F>
double bisect_increasing(F f, double target) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double binomial_cdf(long long k, long long n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  if (static_cast<double>(k) < static_cast<double>(n) * p) return tail_sum(k, n, p, -1);
  return 1.0 - tail_sum(k + 1, n, p, +1);
}

double binomial_upper_tail(long long k, long long n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (static_cast<double>(k) > static_cast<double>(n) * p) return tail_sum(k, n, p, +1);
  return 1.0 - tail_sum(k - 1, n, p, -1);
}

IntervalEstimate clopper_pearson(long long k, long long n, double confidence) {
  if (n < 1) throw DomainError("Clopper-Pearson needs n >= 1");
  if (k < 0 || k > n) throw DomainError("Clopper-Pearson needs 0 <= k <= n");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  const double half_alpha = 0.5 * (1.0 - confidence);
  const double p_hat = static_cast<double>(k) / static_cast<double>(n);
  // P(X >= k) rises with p; P(X <= k) falls with p.
  double lower = k == 0 ? 0.0
                        : bisect_increasing([&](double p) { return binomial_upper_tail(k, n, p); },
                                            half_alpha);
  double upper = k == n ? 1.0
                        : bisect_increasing([&](double p) { return -binomial_cdf(k, n, p); },
                                            -half_alpha);
  lower = std::min(lower, p_hat);
  upper = std::max(upper, p_hat);
  return IntervalEstimate{p_hat, lower, upper, confidence};
}

CountsRecord sample_measurements(const Distribution& dist, std::uint64_t shots, std::uint64_t seed,
                                 double detect_eff) {
  if (shots < 1) throw DomainError("sampling needs at least one shot");
  if (!(detect_eff > 0.0 && detect_eff <= 1.0)) {
    throw DomainError("detection efficiency must lie in (0, 1]");
  }
  std::vector<double> cumulative(dist.p.size());
  std::partial_sum(dist.p.begin(), dist.p.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();
  if (!(total > 0.0)) throw DomainError("cannot sample from an empty distribution");

  CountsRecord rec{dist.window, std::vector<std::uint64_t>(dist.p.size(), 0), shots, 0, seed};
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u_site = uniform53(rng) * total;
    const double u_loss = uniform53(rng);
    if (u_loss >= detect_eff) {
      ++rec.lost;
      continue;
    }
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u_site);
    if (it == cumulative.end()) --it;
    // Skip zero-probability sites sharing the same cumulative value.
    while (dist.p[static_cast<std::size_t>(it - cumulative.begin())] <= 0.0 &&
           it != cumulative.begin()) {
      --it;
    }
    ++rec.counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return rec;
}

std::vector<IntervalEstimate> empirical_distribution(const CountsRecord& counts,
                                                     double confidence) {
  std::uint64_t n = 0;
  for (const auto c : counts.counts) n += c;
  if (n == 0) throw DomainError("no retained shots to estimate from");
  std::vector<IntervalEstimate> out;
  out.reserve(counts.counts.size());
  for (const auto c : counts.counts) {
    out.push_back(clopper_pearson(static_cast<long long>(c), static_cast<long long>(n), confidence));
  }
  return out;
}

}  // namespace eqwalk
