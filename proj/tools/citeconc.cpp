/*
   Copyright 2026 The citeconc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "citeconc/cli.hpp"

namespace {

std::optional<citeconc::YearRange> span_from(int start, int end) {
  if (start == 0 && end == 0) return std::nullopt;
  if (start == 0 || end == 0 || start > end) throw CLI::ValidationError("--start/--end", "need start <= end");
  return citeconc::YearRange{start, end};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation concentration analysis over windowed citation graphs"};
  app.require_subcommand(1);

  std::string articles, edges, config, scenario, out_dir = "generated";
  int start = 0, end = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;

  auto* validate = app.add_subcommand("validate", "Check input tables and print a drop summary");
  validate->add_option("--articles", articles, "Articles TSV")->required();
  validate->add_option("--edges", edges, "Edges TSV")->required();
  validate->add_option("--start", start, "First year of the analysis span");
  validate->add_option("--end", end, "Last year of the analysis span");

  auto* analyze = app.add_subcommand("analyze", "Run the studies of a config file");
  analyze->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("generate", "Write a synthetic corpus");
  gen->add_option("--scenario", scenario, "Preset name")
      ->required()
      ->check(CLI::IsMember(citeconc::scenario_names()));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--start", start, "First emitted year");
  gen->add_option("--end", end, "Last emitted year");
  gen->add_option("--set", sets, "Generator override, generator.KEY=VALUE");
  gen->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
    if (*validate) {
      return citeconc::cli::run_validate(articles, edges, span_from(start, end), std::cout, std::cerr);
    }
    if (*analyze) return citeconc::cli::run_analyze(config, std::cout, std::cerr);

    citeconc::cli::GenerateRequest req;
    req.scenario = scenario;
    req.seed = seed;
    req.span = span_from(start, end);
    req.out_dir = out_dir;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected KEY=VALUE, got '" + s + "'");
      std::string key = s.substr(0, eq);
      if (key.rfind("generator.", 0) != 0) key = "generator." + key;
      req.overrides.emplace_back(key, s.substr(eq + 1));
    }
    return citeconc::cli::run_generate(req, std::cout, std::cerr);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : citeconc::cli::kUsage;
  }
}
