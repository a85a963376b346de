#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "eqwalk/cli/run.hpp"

using namespace eqwalk::cli;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p(EQWALK_TEST_TMP);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string expect_config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError for: " << text);
  return {};
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(EQWALK_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config validation reports the offending field") {
  CHECK(expect_config_error(R"({"mode": "evolve", "phi": 0, "steps": 3, "output": {"path": "x"},
      "bogus": 1})").find("'bogus'") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "evolve", "phi": 0, "phi_named": "golden", "steps": 3,
      "output": {"path": "x"}})").find("exactly one") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "evolve", "steps": 3, "output": {"path": "x"}})")
            .find("exactly one") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "bands", "phi": 0.5, "output": {"path": "x"}})")
            .find("rational") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "sample", "phi": 0.5, "steps": 2, "output": {"path": "x"}})")
            .find("sampling.shots") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "evolve", "phi": 0, "steps": 3, "dephase_p": 2,
      "output": {"path": "x"}})").find("dephase_p") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "evolve", "phi": 0, "steps": [1, 2],
      "output": {"path": "x"}})").find("steps") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "evolve", "phi": 0, "steps": 3,
      "output": {"path": "x", "format": "xml"}})").find("output.format") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "walk", "phi": 0, "steps": 3, "output": {"path": "x"}})")
            .find("mode") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "compare", "phi": 0, "steps": 3,
      "compare": [{"phi": 1, "extra": 2}], "output": {"path": "x"}})")
            .find("compare[0].extra") != std::string::npos);
  const auto malformed = expect_config_error("{\n  \"mode\": \"evolve\",\n  \"phi\": ,\n}");
  CHECK(malformed.find("line 3") != std::string::npos);
}

TEST_CASE("phi specs") {
  const auto cfg = parse_config(R"({"mode": "revival", "phi_rational": [2, 16], "steps": 20,
      "output": {"path": "x"}})");
  CHECK(cfg.phi.kind() == PhiSpec::Kind::Rational);
  CHECK(cfg.phi.as_rational().m() == 8);
  CHECK(PhiSpec::golden().evaluate() == doctest::Approx(2.0 * M_PI / 1.618033988749895));
  CHECK(PhiSpec::golden().describe()["spec"]["phi_named"] == "golden");
}

TEST_CASE("revival mode finds peaks at 8 and 16") {
  const auto cfg = parse_config(R"({"mode": "revival", "phi_rational": [1, 8], "steps": 20,
      "output": {"path": "x"}})");
  const auto res = execute(cfg);
  REQUIRE(res.tables.size() == 1);
  CHECK(res.tables[0].rows.size() == 21);
  CHECK(res.meta["revival_peaks"] == nlohmann::json::array({8, 16}));
}

TEST_CASE("evolve mode with zero steps") {
  const auto cfg = parse_config(R"({"mode": "evolve", "phi": 0, "steps": 0,
      "output": {"path": "x"}})");
  const auto res = execute(cfg);
  REQUIRE(res.tables[0].name == "distribution");
  REQUIRE(res.tables[0].rows.size() == 1);
  CHECK(std::get<long long>(res.tables[0].rows[0][1]) == 0);
  CHECK(std::get<double>(res.tables[0].rows[0][2]) == 1.0);
}

TEST_CASE("localize mode reports the exponential fit") {
  const auto cfg = parse_config(R"({"mode": "localize", "phi_named": "golden",
      "steps": [4, 6, 8, 10, 12], "output": {"path": "x"}})");
  const auto res = execute(cfg);
  CHECK(res.meta["fit"]["r_squared"].get<double>() > 0.9);
  CHECK(res.meta["fit"]["xi"].get<double>() > 0.0);
  CHECK(res.meta["phi"]["radians"].get<double>() ==
        doctest::Approx(2.0 * M_PI / 1.618033988749895));
}

TEST_CASE("bands, compare, discriminate and sample modes") {
  auto bands = execute(parse_config(R"({"mode": "bands", "phi_rational": [1, 5],
      "grid_points": 16, "output": {"path": "x"}})"));
  CHECK(bands.tables[0].rows.size() == 16 * 10);
  for (const auto& f : bands.meta["flatness"]) CHECK(f.get<double>() < 0.05 * M_PI / 2);

  auto compare = execute(parse_config(R"({"mode": "compare", "phi_rational": [1, 3], "steps": 18,
      "compare": [{"phi_rational": [1, 6]}, {"phi": 1.0}], "grid_points": 60,
      "output": {"path": "x"}})"));
  CHECK(compare.tables.size() == 3);
  CHECK(compare.meta["fields"][1]["velocity_delta"].get<double>() < 1e-6);
  CHECK(compare.meta["fields"][2]["velocity_delta"].is_null());

  auto disc = execute(parse_config(R"({"mode": "discriminate", "phi_named": "golden",
      "against": {"phi_rational": [5, 8]}, "output": {"path": "x"}})"));
  CHECK(disc.meta["empirical_steps"].is_number_integer());

  auto sample = execute(parse_config(R"({"mode": "sample", "phi": 0, "steps": 2,
      "sampling": {"shots": 2000, "seed": 7, "detect_eff": 0.9},
      "output": {"path": "x"}})"));
  CHECK(sample.tables[0].columns ==
        std::vector<std::string>{"site", "count", "p_hat", "lower", "upper"});
  CHECK(sample.meta["generator"] == "mt19937_64");
  CHECK(sample.meta["seed"] == 7);
}

TEST_CASE("CSV output layout") {
  const auto base = (tmp_dir() / "layout").string();
  auto cfg = parse_config(R"({"mode": "revival", "phi_rational": [1, 8], "steps": 4,
      "output": {"path": "unused"}})", Overrides{std::nullopt, base, std::nullopt, std::nullopt});
  const auto files = write_outputs(cfg, execute(cfg));
  REQUIRE(files.size() == 2);
  const auto lines = lines_of(slurp(base + ".revival.csv"));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "step,return_probability");
  CHECK(lines[1] == "0,1.000000000000000e+00");
  const auto meta = nlohmann::json::parse(slurp(base + ".meta.json"));
  CHECK(meta["config_hash"] == config_hash(cfg));
  CHECK(meta["version"] == kToolVersion);
  CHECK(format_real(0.25) == "2.500000000000000e-01");
}

TEST_CASE("command-line tool: exit codes and byte-identical reruns") {
  const auto dir = tmp_dir();
  const auto cfg = write_config("sample.json", R"({"mode": "sample", "phi_named": "golden",
      "steps": 12, "sampling": {"shots": 5000, "seed": 11, "detect_eff": 0.9},
      "output": {"path": "ignored"}})");
  const auto a = (dir / "run_a").string();
  const auto b = (dir / "run_b").string();
  CHECK(run_tool("--config " + cfg.string() + " --out " + a) == 0);
  CHECK(run_tool("--config " + cfg.string() + " --out " + b) == 0);
  CHECK(slurp(a + ".sample.csv") == slurp(b + ".sample.csv"));
  CHECK(slurp(a + ".meta.json") == slurp(b + ".meta.json"));
  CHECK(!slurp(a + ".sample.csv").empty());

  // A different seed changes the counts.
  const auto c = (dir / "run_c").string();
  CHECK(run_tool("--config " + cfg.string() + " --out " + c + " --seed 12") == 0);
  CHECK(slurp(a + ".sample.csv") != slurp(c + ".sample.csv"));

  const auto j = (dir / "nested" / "deeper" / "run_j").string();
  CHECK(run_tool("--config " + cfg.string() + " --out " + j + " --format json --mode evolve") == 0);
  const auto doc = nlohmann::json::parse(slurp(j + ".json"));
  CHECK(doc["meta"]["mode"] == "evolve");
  CHECK(doc["tables"]["distribution"]["columns"].size() == 3);

  const auto bad = write_config("bad.json", R"({"mode": "evolve", "phi": 0})");
  CHECK(run_tool("--config " + bad.string()) == kExitConfig);
  CHECK(run_tool("--config " + (dir / "missing.json").string()) == kExitConfig);
  CHECK(run_tool("--config " + cfg.string() + " --format xml") == kExitConfig);

  // A delta-only average has nothing to fit.
  const auto nofit = write_config("nofit.json", R"({"mode": "localize", "phi": 1.0, "steps": [0],
      "output": {"path": "ignored"}})");
  CHECK(run_tool("--config " + nofit.string() + " --out " + (dir / "nofit").string()) ==
        kExitNumerical);
}
