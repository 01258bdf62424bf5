// ahlfors <verify|decompose|soliton|constraints|gen-tt> --config <path>
//         [--out <path>] [--dump <dir>]
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = ahlfors::cli;
  CLI::App app{"Pseudo-spectral Cauchy-Ahlfors toolkit on periodic tori"};
  app.require_subcommand(1, 1);

  std::string config, out, dump;
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "report path (default: standard output)");
    sub->add_option("--dump", dump, "directory for CSV field dumps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return cli::execute_file(command, config, out, dump, std::cout, std::cerr);
}
