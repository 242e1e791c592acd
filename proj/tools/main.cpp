// Copyright 2026 The QEP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum equilibrium propagation experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool print_config = false;
  for (const auto& name : qep::cli::experiment_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (defaults when omitted)");
    sub->add_option("--set", overrides, "key=value override, repeatable");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--print-config", print_config, "print the materialized config and exit");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    nlohmann::json doc = config_path.empty() ? nlohmann::json::object()
                                             : qep::cli::read_config_file(config_path);
    if (doc.contains("experiment") && doc["experiment"] != experiment) {
      throw qep::cli::ConfigError("config file is for '" + doc["experiment"].dump() +
                                  "', command is '" + experiment + "'");
    }
    doc["experiment"] = experiment;
    qep::cli::apply_overrides(doc, overrides);
    const auto config = qep::cli::parse_config(doc);
    if (print_config) {
      std::cout << config.values().dump(2) << '\n';
      return 0;
    }
    if (out_dir.empty()) throw qep::cli::ConfigError("--out is required");
    return qep::cli::run(config, out_dir, std::cerr);
  } catch (const qep::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
