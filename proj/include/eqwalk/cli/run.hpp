#pragma once

#include <string>
#include <variant>
#include <vector>

#include "eqwalk/cli/config.hpp"

namespace eqwalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

using Cell = std::variant<long long, double>;

/// A named table destined for one CSV file (or one entry of the JSON document).
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  std::vector<Table> tables;
  nlohmann::json meta;
};

/// Executes the configured analysis without touching the filesystem.
RunResult execute(const RunConfig& config);

/// Writes `<base>.<table>.csv` files plus `<base>.meta.json`, or a single
/// `<base>.json`. Returns the paths written.
std::vector<std::string> write_outputs(const RunConfig& config, const RunResult& result);

/// Full pipeline with exit-status mapping: 0 ok, 2 config error, 3 numerical error.
int run(const std::string& config_path, const Overrides& overrides, std::string& diagnostic);

/// Fixed scientific notation with 16 significant digits.
std::string format_real(double value);

}  // namespace eqwalk::cli
