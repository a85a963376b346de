#include <iostream>

#include "CLI11.hpp"

#include "eqwalk/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Electric quantum walk simulator and spectral toolkit"};
  app.set_version_flag("--version", eqwalk::cli::kToolVersion);

  std::string config_path;
  eqwalk::cli::Overrides overrides;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  app.add_option("--mode", overrides.mode, "Override the configured mode")
      ->check(CLI::IsMember({"evolve", "bands", "revival", "localize", "compare", "discriminate",
                             "sample"}));
  app.add_option("--out", overrides.out, "Output base path");
  app.add_option("--format", overrides.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", overrides.seed, "Override the sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : eqwalk::cli::kExitConfig;
  }

  std::string diagnostic;
  const int status = eqwalk::cli::run(config_path, overrides, diagnostic);
  if (status != eqwalk::cli::kExitOk) std::cerr << "eqwalk: " << diagnostic << '\n';
  return status;
}
