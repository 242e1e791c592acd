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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

using namespace qep;
using namespace qep::cli;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qep_test_config_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("a minimal audit config materializes every default", "[config]") {
  const auto c = parse_config(json{{"experiment", "onsager-audit"}, {"n", 4}, {"seed", 1}});
  CHECK(c.experiment() == "onsager-audit");
  CHECK(c.seed() == 1);
  const auto defaults = default_config("onsager-audit");
  for (const auto& [key, value] : defaults.items()) CHECK(c.values().contains(key));
  CHECK(c.values()["instances"] == 10);
  CHECK(c.values()["delta"] == 1e-4);
  CHECK(audit_config(c).n_sites == 4);
}

TEST_CASE("materialized configs re-parse to the identical config", "[config]") {
  for (const auto& name : experiment_names()) {
    const auto c = parse_config(json{{"experiment", name}});
    const auto again = parse_config(json::parse(c.values().dump()));
    CHECK(again == c);
    CHECK(again.values().dump() == c.values().dump());
  }
}

TEST_CASE("integers given for real-valued keys are normalised", "[config]") {
  const auto c = parse_config(json{{"experiment", "explore-phase"}, {"beta", 1}});
  CHECK(c.values()["beta"].is_number_float());
  CHECK(parse_config(json::parse(c.values().dump())) == c);
}

TEST_CASE("invalid values name the key and the constraint", "[config][errors]") {
  auto message = [](const json& doc) -> std::string {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  const auto beta = message({{"experiment", "train-phase-classifier"}, {"beta", -0.1}});
  CHECK_THAT(beta, Catch::Matchers::ContainsSubstring("beta > 0"));
  CHECK_THAT(beta, Catch::Matchers::ContainsSubstring("'beta'"));
  CHECK_THAT(message({{"experiment", "explore-phase"}, {"n", 2}}),
             Catch::Matchers::ContainsSubstring("n >= 3"));
  CHECK_THAT(message({{"experiment", "explore-phase"}, {"bogus", 1}}),
             Catch::Matchers::ContainsSubstring("unknown key 'bogus'"));
  CHECK_THAT(message({{"experiment", "nudge-sweep"}, {"betas", {0.1, 0.0}}}),
             Catch::Matchers::ContainsSubstring("beta > 0"));
  CHECK_THAT(message({{"experiment", "explore-phase"}, {"scheme", "both"}}),
             Catch::Matchers::ContainsSubstring("'scheme'"));
  CHECK_THAT(message({{"experiment", "explore-phase"}, {"steps", 1.5}}),
             Catch::Matchers::ContainsSubstring("integer"));
  CHECK_THAT(message({{"experiment", "explore-phase"}, {"observable_sites", {0, 12}}}),
             Catch::Matchers::ContainsSubstring("observable_sites"));
  CHECK_THAT(message({{"experiment", "optimize-sensitivity"}, {"start_g_x_2", -0.2}}),
             Catch::Matchers::ContainsSubstring("start_g_x_1 != start_g_x_2"));
  CHECK_THAT(message({{"experiment", "train-phase-classifier"},
                      {"label_map", {{"cluster", {1, 1}}, {"ferromagnetic", {1, 1}},
                                     {"paramagnetic", {-1, -1}}}}}),
             Catch::Matchers::ContainsSubstring("distinct"));
  CHECK_THAT(message({{"experiment", "teleport"}}),
             Catch::Matchers::ContainsSubstring("unknown experiment"));
  CHECK_THAT(message(json::object()), Catch::Matchers::ContainsSubstring("experiment"));
}

TEST_CASE("overrides parse JSON values and fall back to strings", "[config]") {
  json doc{{"experiment", "explore-phase"}};
  apply_overrides(doc, {"beta=0.2", "scheme=one_sided", "shots=10", "observable_sites=[1,3]"});
  const auto c = parse_config(doc);
  CHECK(c.values()["beta"] == 0.2);
  CHECK(c.values()["scheme"] == "one_sided");
  CHECK(explore_config(c).setup.shots == 10);
  CHECK(explore_config(c).setup.observable_sites == std::array<int, 2>{1, 3});
  CHECK_THROWS_AS(apply_overrides(doc, {"novalue"}), ConfigError);
}

TEST_CASE("typed configs carry the materialized values", "[config]") {
  const auto s = supervised_config(parse_config(json{{"experiment", "train-phase-classifier"}}));
  CHECK(s.batch_size == 10);
  CHECK(s.shots == 10);
  CHECK(s.beta == 0.4);
  CHECK(s.learning_rate == 0.01);
  CHECK(s.test_size == 200);
  CHECK(s.setup.parameter_count() == 51);
  const auto e = explore_config(parse_config(json{{"experiment", "explore-phase"}}));
  CHECK(e.setup.chain_length == 10);
  CHECK(e.setup.g_zxz == -0.5);
  CHECK(e.g_x == -0.1);
  CHECK(e.g_zz == 0.4);
  const auto w = sweep_config(parse_config(json{{"experiment", "nudge-sweep"}}));
  CHECK(w.shots.size() == 2);
  CHECK_FALSE(w.shots[0].has_value());
  CHECK_THROWS_AS(explore_config(parse_config(json{{"experiment", "nudge-sweep"}})), ConfigError);
}

TEST_CASE("the audit run writes artifacts and reports reciprocity", "[config][cli]") {
  const auto dir = scratch("audit");
  const auto c = parse_config(json{{"experiment", "onsager-audit"}, {"instances", 2}, {"seed", 3}});
  std::ostringstream log;
  REQUIRE(run(c, dir, log) == 0);
  for (const char* f : {"trajectory.csv", "summary.csv", "manifest.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const auto manifest = json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest["status"] == "COMPLETE");
  CHECK(manifest["config"] == c.values());
  CHECK(manifest["results"]["max_asymmetry"].get<double>() < 1e-6);
  CHECK(parse_config(manifest["config"]) == c);
}

TEST_CASE("identical runs produce byte-identical artifacts", "[config][cli]") {
  json doc{{"experiment", "explore-phase"}, {"n", 6}, {"steps", 5}, {"shots", 10}, {"seed", 9},
           {"observable_sites", {0, 3}}};
  const auto c = parse_config(doc);
  const auto a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  REQUIRE(run(c, a, log) == 0);
  REQUIRE(run(c, b, log) == 0);
  for (const char* f : {"trajectory.csv", "summary.csv", "manifest.json"}) {
    CHECK(read_file(a / f) == read_file(b / f));
  }
}

TEST_CASE("failed runs leave an INCOMPLETE manifest", "[config][cli]") {
  // Three Lanczos steps cannot converge a 64-dimensional ground state.
  const auto c = parse_config(json{{"experiment", "explore-phase"},
                                   {"n", 6},
                                   {"steps", 2},
                                   {"observable_sites", {0, 3}},
                                   {"lanczos_max_iter", 3}});
  const auto dir = scratch("fail");
  std::ostringstream log;
  CHECK(run(c, dir, log) == 1);
  const auto manifest = json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest["status"] == "INCOMPLETE");
  CHECK_FALSE(manifest["failure"].get<std::string>().empty());
}
