#include <iostream>

#include "CLI11.hpp"
#include "ldorb/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Locally divergent orbits: stratification, closures, units and forms"};
  std::string config, out = ".";
  ldorb::CliOverrides over;
  app.add_option("--config", config, "JSON job config")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--precision", over.precision, "root precision in bits");
  app.add_option("--height", over.height, "search height");
  app.add_option("--workers", over.workers, "worker threads");
  app.add_option("--seed", over.seed, "random seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return ldorb::run_cli(config, out, over, std::cerr);
}
