// phasebound: partition-function bounds from generalized phase-space symbols.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace phasebound::cli;

namespace {

std::string flag_name(const std::string& key) {
  std::string out = "--";
  for (char c : key) out += c == '_' ? '-' : c;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on quantum partition functions from phase-space symbols"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config;
    std::string argument;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "lowest eigenvalues of the truncated Hamiltonian"},
      {"bounds", "lower/exact/upper partition functions over a beta grid (CSV)"},
      {"symbols", "lower and upper symbols on a phase-space grid"},
      {"optimize", "search a sigma family for the tightest bound"},
      {"reproduce", "fixed presets: harmonic | kerr | anharmonic"},
  };
  for (const auto& [name, help] : commands) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(name, help);
    sub->app->add_option("--config", sub->config, "flat key=value file; flags override it");
    for (const auto& [key, def] : known_keys()) {
      sub->values[key];
      sub->app->add_option(flag_name(key), sub->values[key],
                           def.empty() ? key : key + " (default " + def + ")");
    }
    if (name == "reproduce") {
      sub->app->add_option("name", sub->argument, "harmonic | kerr | anharmonic")->required();
    }
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    KeyValues kv;
    try {
      if (!sub->config.empty()) kv = read_key_value_file(sub->config);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    }
    for (const auto& [key, value] : sub->values) {
      if (sub->app->get_option(flag_name(key))->count() > 0) kv[key] = value;
    }
    return run(sub->app->get_name(), kv, sub->argument, std::cout, std::cerr);
  }
  return kConfigError;
}
