#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "eqwalk/lattice.hpp"
#include "eqwalk/spectral.hpp"

namespace eqwalk::cli {

inline constexpr const char* kToolName = "eqwalk";
inline constexpr const char* kToolVersion = "0.3.0";

/// Invalid or unreadable run configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Evolve, Bands, Revival, Localize, Compare, Discriminate, Sample };

enum class OutputFormat { Csv, Json };

const char* to_string(Mode mode);

/// A Bloch phase as written in a config: plain radians, a rational 2*pi*n/m, or
/// the named golden-ratio field 2*pi/phi. Only evaluated where it is used.
class PhiSpec {
 public:
  enum class Kind { Radians, Rational, Golden };

  static PhiSpec radians(double value);
  static PhiSpec rational(long long n, long long m);
  static PhiSpec golden();

  Kind kind() const { return kind_; }
  double evaluate() const;
  /// Only valid for Kind::Rational.
  const RationalPhase& as_rational() const;
  nlohmann::json describe() const;

 private:
  Kind kind_ = Kind::Radians;
  double radians_ = 0.0;
  std::optional<RationalPhase> rational_;
};

struct Sampling {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double detect_eff = 0.9;
  double confidence = 0.68;
};

struct RunConfig {
  Mode mode = Mode::Evolve;
  PhiSpec phi;
  double theta = 0.0;
  std::vector<int> steps;
  double dephase_p = 0.0;
  int initial_site = 0;
  Spinor initial_spinor;
  std::optional<Sampling> sampling;
  int grid_points = 64;
  std::vector<PhiSpec> compare;
  std::optional<PhiSpec> against;
  double threshold = 0.2;
  int cap = 0;
  int width_t_max = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;

  /// Effective document the config was built from (after overrides).
  nlohmann::json source;
};

/// Command-line overrides applied on top of the config document.
struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a config document. Errors name the offending field, or
/// the line and column for malformed text.
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

/// 64-bit FNV-1a of the canonical dump of the effective config, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace eqwalk::cli
