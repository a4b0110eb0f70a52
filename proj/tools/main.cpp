#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cli.hpp"

using nlohmann::json;
namespace cli = vperc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Random Voronoi percolation experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> flags;

  const auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its keys");
    for (const auto& key : cli::config_keys()) {
      if (key.name == "experiment") continue;
      sub->add_option("--" + key.name, flags[key.name], key.help);
    }
  };
  for (const auto& name : cli::experiment_names()) add_flags(app.add_subcommand(name, "run the " + name + " experiment"));
  CLI::App* run = app.add_subcommand("run", "run the experiment named in the config file");
  add_flags(run);
  run->add_option("--experiment", flags["experiment"], "experiment to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    json file = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw vperc::Error(vperc::ErrorKind::io, "cannot read config " + config_path);
      try {
        in >> file;
      } catch (const json::exception& e) {
        throw vperc::Error(vperc::ErrorKind::io, config_path + ": " + e.what());
      }
    }
    json given = json::object();
    for (const auto* sub : app.get_subcommands()) {
      for (const auto& key : cli::config_keys()) {
        const auto* opt = sub->get_option_no_throw("--" + key.name);
        if (opt && opt->count() > 0) given[key.name] = cli::parse_flag_value(key.name, flags[key.name]);
      }
      if (sub->get_name() != "run") given["experiment"] = sub->get_name();
    }
    const json merged = cli::merge_layers(file, std::getenv("VORONOI_PERC_SEED"), given);
    return cli::run(cli::RunConfig::from_json(merged), std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
