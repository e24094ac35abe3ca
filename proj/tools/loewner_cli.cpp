#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "loewner/error.hpp"

using namespace loewner;
using namespace loewner::cli;

int main(int argc, char** argv) {
  CLI::App app{"Loewner evolution, Grunsky and Virasoro toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_source, out_dir = ".";
  std::vector<std::string> overrides;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("-c,--config", config_source, "JSON config file, or inline JSON starting with '{'");
    sub->add_option("-s,--set", overrides, "override a top-level field, key=value (repeatable)");
    sub->add_option("-o,--out", out_dir, "directory for the artifacts")->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  std::string command = app.get_subcommands().front()->get_name();

  try {
    Json config = config_source.empty() ? Json::object() : load_config(config_source);
    for (const auto& o : overrides) apply_override(config, o);
    auto outcome = run_command(command, config);
    write_artifacts(outcome.artifacts, out_dir);
    for (const auto& a : outcome.artifacts) std::cout << "wrote " << out_dir << "/" << a.name << "\n";
    if (outcome.exit_code != kOk) std::cerr << "error: " << outcome.message << "\n";
    return outcome.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const Json::exception& e) {
    std::cerr << "error: ConfigInvalid: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
}
