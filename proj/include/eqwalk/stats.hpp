#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqwalk/analysis.hpp"

namespace eqwalk {

/// Name of the generator behind sample_measurements, echoed in output metadata.
inline constexpr const char* kSamplerGenerator = "mt19937_64";

/// Simulated detection record. counts[i] belongs to window.site(i).
struct CountsRecord {
  SiteWindow window;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t lost = 0;
  std::uint64_t seed = 0;

  std::uint64_t retained() const { return shots - lost; }
};

struct IntervalEstimate {
  double p_hat;
  double lower;
  double upper;
  double confidence;
};

/// Draws `shots` sites from `dist`; each shot is independently lost with
/// probability 1 - detect_eff. Every shot consumes exactly two 53-bit uniforms
/// from a single mt19937_64 stream seeded with `seed` (site draw, then loss draw),
/// so the record is bit-reproducible across platforms.
CountsRecord sample_measurements(const Distribution& dist, std::uint64_t shots, std::uint64_t seed,
                                 double detect_eff);

/// P(X <= k) and P(X >= k) for X ~ Binomial(n, p). Sums the smaller tail
/// directly and takes the complement otherwise.
double binomial_cdf(long long k, long long n, double p);
double binomial_upper_tail(long long k, long long n, double p);

/// Exact equal-tail interval for k successes out of n, solved by bisection on
/// the binomial tails to 1e-9 in p.
IntervalEstimate clopper_pearson(long long k, long long n, double confidence);

/// Per-site estimates conditioned on retrieval: lost shots are left out of n.
std::vector<IntervalEstimate> empirical_distribution(const CountsRecord& counts,
                                                     double confidence);

}  // namespace eqwalk
