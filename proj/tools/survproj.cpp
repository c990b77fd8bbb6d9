// Copyright 2026 The survproj Authors
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

#include "survproj/config.hpp"
#include "survproj/dataset.hpp"
#include "survproj/errors.hpp"
#include "survproj/inference.hpp"
#include "survproj/parallel.hpp"
#include "survproj/report.hpp"
#include "survproj/simgen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace survproj;

struct Common {
  std::string out;
  std::string format;
  int threads = 0;
};

struct AnalysisArgs {
  std::string config;
  std::string input;
  std::optional<std::uint64_t> seed;
  bool nested = false;
};

struct SimArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<long long> iterations;
  std::optional<int> bootstrap_reps;
  std::optional<long long> population_iterations;
  std::optional<long long> population_n;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out,-o", c.out, "Output path (default: standard output)");
  cmd->add_option("--format,-f", c.format, "json, csv or text (default: from --out extension, else json)");
  cmd->add_option("--threads,-j", c.threads, "Worker threads (overrides SURVPROJ_THREADS)")->check(CLI::NonNegativeNumber);
}

Format resolve_format(const Common& c) {
  if (!c.format.empty()) return parse_format(c.format);
  const auto ends_with = [&](const std::string& suffix) {
    return c.out.size() >= suffix.size() && c.out.compare(c.out.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".csv")) return Format::csv;
  if (ends_with(".txt")) return Format::text;
  return Format::json;
}

void emit(const Common& c, const std::string& bytes) {
  if (c.out.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw ValidationError("cannot open output file '" + c.out + "'");
  os << bytes;
  if (!os) throw ValidationError("failed writing output file '" + c.out + "'");
  std::cerr << "wrote " << c.out << "\n";
}

int run_analysis(const std::string& command, const AnalysisArgs& a, const Common& c) {
  const KeyValueConfig kv = KeyValueConfig::load(a.config);
  AnalysisConfig config = analysis_config_from(kv);
  if (a.seed) config.seed = *a.seed;
  std::cerr << "reading " << a.input << "\n";
  const SurvivalDataset ds = load_csv(a.input, config.columns);
  std::cerr << command << ": n=" << ds.n() << ", events=" << ds.events() << ", method " << to_string(config.method)
            << "\n";
  AnalysisReport report;
  if (command == "impact" && a.nested) {
    report = analyze("concordance", ds, config);
    report.command = "impact";
    report.impact = naive_nested_impact(ds, config);
  } else {
    report = analyze(command, ds, config);
  }
  emit(c, render(report, resolve_format(c)));
  return 0;
}

SimScenario load_scenario(const SimArgs& a) {
  SimScenario s = scenario_from_config(KeyValueConfig::load(a.scenario));
  if (a.seed) s.seed = *a.seed;
  if (a.iterations) s.iterations = *a.iterations;
  if (a.bootstrap_reps) s.bootstrap_reps = *a.bootstrap_reps;
  if (a.population_iterations) s.population_iterations = *a.population_iterations;
  if (a.population_n) s.population_n = *a.population_n;
  s.validate();
  return s;
}

int run_simulate(const SimArgs& a, const Common& c) {
  const SimScenario s = load_scenario(a);
  std::cerr << "simulate " << s.name << ": population " << s.population_iterations << " x " << s.population_n
            << ", then " << s.iterations << " iterations x " << s.bootstrap_reps << " bootstrap reps on "
            << thread_count() << " threads\n";
  const PopulationParams truth = population_params(s);
  std::cerr << "population: kappa " << truth.kappa << ", projected " << truth.kappa_projected << "\n";
  const SimReport report = run_study(s, truth);
  std::cerr << "done: " << report.failures << " failed iterations\n";
  emit(c, render(report, resolve_format(c)));
  return 0;
}

int run_population(const SimArgs& a, const Common& c) {
  const SimScenario s = load_scenario(a);
  std::cerr << "population " << s.name << ": " << s.population_iterations << " x " << s.population_n << "\n";
  const PopulationParams p = population_params(s);
  emit(c, render(s, p, resolve_format(c)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concordance and covariate-impact estimation for censored survival data", "survproj"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  AnalysisArgs analysis;
  SimArgs sim;

  const std::vector<std::pair<std::string, std::string>> analysis_commands{
      {"fit", "Fit the enhanced-model coefficients of the configured method"},
      {"ph-test", "Proportional-hazards test on scaled Schoenfeld residuals"},
      {"concordance", "Enhanced and projected concordance of the configured method"},
      {"impact", "Impact of the new covariates on concordance, with bootstrap intervals"}};
  std::vector<CLI::App*> analysis_apps;
  for (const auto& [name, help] : analysis_commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config,-c", analysis.config, "Analysis config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--input,-i", analysis.input, "Input CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", analysis.seed, "Override the config seed");
    if (name == "impact") {
      cmd->add_flag("--nested", analysis.nested, "Difference against a separately fitted x-only model instead");
    }
    add_common(cmd, common);
    analysis_apps.push_back(cmd);
  }

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo study of a scenario");
  simulate->add_option("--scenario,-s", sim.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--iterations,-n", sim.iterations, "Simulation iterations");
  simulate->add_option("--bootstrap-reps", sim.bootstrap_reps, "Bootstrap replicates per iteration");
  simulate->add_option("--population-iterations", sim.population_iterations, "Cohorts for the true parameters");
  simulate->add_option("--population-n", sim.population_n, "Cohort size for the true parameters");
  add_common(simulate, common);

  CLI::App* population = app.add_subcommand("population", "True concordance parameters of a scenario");
  population->add_option("--scenario,-s", sim.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  population->add_option("--seed", sim.seed, "Random seed");
  population->add_option("--iterations,-n", sim.population_iterations, "Cohorts to average");
  population->add_option("--population-n", sim.population_n, "Cohort size");
  add_common(population, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (common.threads > 0) set_thread_count(common.threads);
    for (CLI::App* cmd : analysis_apps) {
      if (cmd->parsed()) return run_analysis(cmd->get_name(), analysis, common);
    }
    if (simulate->parsed()) return run_simulate(sim, common);
    if (population->parsed()) return run_population(sim, common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
