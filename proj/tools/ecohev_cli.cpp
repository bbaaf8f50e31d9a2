/*
 * Copyright (C) 2026 The ecohev Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ecohev/config.hpp"
#include "ecohev/harness.hpp"

namespace fs = std::filesystem;
using namespace ecohev;
using namespace ecohev::harness;

namespace
{

constexpr int kOk = 0;
constexpr int kCaseFailure = 1;
constexpr int kConfigError = 2;

struct Common
{
  std::string scenario = "data/scenario_default.json";
  std::string out = "out";
  std::string controller;
  std::string planner;
  double tcat0 = -1.0e9;
};

Scenario load(const Common& c)
{
  Scenario sc = load_scenario(c.scenario);
  if (!c.controller.empty())
    sc.controller = parse_controller(c.controller);
  if (!c.planner.empty())
    sc.planner = parse_planner(c.planner);
  if (c.tcat0 > -1.0e8)
  {
    sc.initial.t_cat0 = c.tcat0;
    sc.validate();
  }
  return sc;
}

fs::path out_dir(const Common& c)
{
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

json read_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

int cmd_run(const Common& c)
{
  Scenario sc = load(c);
  auto dir = out_dir(c);
  CaseResult r;
  try
  {
    r = run_case(sc);
  }
  catch (const CaseFailure& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kCaseFailure;
  }
  std::ostringstream csv;
  write_series_csv(csv, r.series);
  write_text_file(dir / "series.csv", csv.str());
  json j = case_to_json(r);
  j["config_digests"] = sc.digests;
  write_text_file(dir / "summary.json", j.dump(2) + "\n");
  std::cout << combination_name({r.planner, r.controller}) << ": " << std::fixed << std::setprecision(4)
            << r.equivalent_energy_kwh << " kWh, fuel " << r.fuel_g << " g, dSOC " << r.delta_soc << ", "
            << r.duration << " s\n";
  return kOk;
}

int cmd_batch(const Common& c, int n, long long seed, int threads)
{
  Scenario sc = load(c);
  if (n < 0)
    n = sc.batch.n;
  std::uint64_t s = seed < 0 ? sc.batch.seed : static_cast<std::uint64_t>(seed);
  auto dir = out_dir(c);
  BatchResult b = run_batch(sc, n, s, {threads, false});
  std::ostringstream csv;
  write_cases_csv(csv, b);
  write_text_file(dir / "cases.csv", csv.str());
  write_text_file(dir / "summary.json", batch_to_json(b).dump(2) + "\n");

  std::cout << std::fixed << std::setprecision(3);
  std::cout << "combination        energy_kWh  saving_%  T_cat_C  T_cl_C  lightoff_s  HC_%    CO_%    NOx_%\n";
  for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
  {
    const auto& m = b.means[ci];
    std::cout << std::left << std::setw(18) << combination_name(kCombinations[ci]) << std::right << std::setw(11)
              << m.energy_kwh << std::setw(10) << m.saving_pct << std::setw(9) << m.mean_t_cat << std::setw(8)
              << m.mean_t_cl << std::setw(12) << m.light_off_time << std::setw(8) << m.improvement_pct.hc
              << std::setw(8) << m.improvement_pct.co << std::setw(8) << m.improvement_pct.nox << '\n';
  }
  std::cout << "failures: " << b.failures << ", DP dominance violations: " << b.dp_dominance_violations << '\n';
  return b.failures > 0 ? kCaseFailure : kOk;
}

void print_row(const std::string& label, double a, double b)
{
  auto imp = emission_improvement(a, b);
  std::cout << std::left << std::setw(14) << label << std::right << std::setw(14) << a << std::setw(14) << b
            << std::setw(12);
  if (imp)
    std::cout << *imp;
  else
    std::cout << "undefined";
  std::cout << '\n';
}

int cmd_compare(const std::string& base_path, const std::string& test_path)
{
  json a = read_json(base_path);
  json b = read_json(test_path);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << std::left << std::setw(14) << "quantity" << std::right << std::setw(14) << "base" << std::setw(14)
            << "test" << std::setw(12) << "improv_%" << '\n';
  if (a.contains("schema") && a.at("schema") == "ecohev.batch_result")
  {
    auto ba = batch_from_json(a);
    auto bb = batch_from_json(b);
    for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
    {
      const auto& ma = ba.means[ci];
      const auto& mb = bb.means[ci];
      const std::string name = combination_name(kCombinations[ci]);
      print_row(name + " kWh", ma.energy_kwh, mb.energy_kwh);
      for (auto s : thermal::kAllSpecies)
        print_row(name + " " + std::string(thermal::to_string(s)), ma.tailpipe_g[s], mb.tailpipe_g[s]);
    }
    return kOk;
  }
  auto ca = case_from_json(a);
  auto cb = case_from_json(b);
  print_row("energy_kWh", ca.equivalent_energy_kwh, cb.equivalent_energy_kwh);
  print_row("fuel_g", ca.fuel_g, cb.fuel_g);
  for (auto s : thermal::kAllSpecies)
    print_row(std::string(thermal::to_string(s)) + "_tp_g", ca.tailpipe_g[s], cb.tailpipe_g[s]);
  return kOk;
}

int cmd_dump_maps(const Common& c)
{
  Scenario sc = load(c);
  auto dir = out_dir(c);
  write_text_file(dir / "engine_maps.json", engine_maps_to_json(sc.powertrain.engine).dump(2) + "\n");
  write_text_file(dir / "emission_maps.json", emission_maps_to_json(sc.thermal.emissions).dump(2) + "\n");
  write_text_file(dir / "efficiency_curves.json",
                  efficiency_curves_to_json(sc.thermal.params.curves, 0.0, 600.0, 10.0).dump(2) + "\n");
  write_text_file(dir / "corridor.json", corridor_to_json(sc.corridor).dump(2) + "\n");
  std::cout << "maps written to " << dir.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Eco-driving and power-split simulation for hybrid vehicles on signalised corridors"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", common.scenario, "scenario file")->capture_default_str();
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--controller", common.controller, "power split controller")
        ->check(CLI::IsMember({"rule", "dp"}));
    sub->add_option("--planner", common.planner, "speed planner")->check(CLI::IsMember({"baseline", "eco"}));
    sub->add_option("--tcat0", common.tcat0, "initial catalyst temperature, deg C");
  };

  auto* run = app.add_subcommand("run", "simulate one vehicle");
  add_common(run);

  int n = -1;
  long long seed = -1;
  int threads = 1;
  auto* batch = app.add_subcommand("batch", "simulate a seeded batch under all four combinations");
  add_common(batch);
  batch->add_option("--n", n, "number of vehicles (default from the scenario)");
  batch->add_option("--seed", seed, "random seed (default from the scenario)");
  batch->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  std::string base_file, test_file;
  auto* compare = app.add_subcommand("compare", "improvement table between two result files");
  compare->add_option("base", base_file, "reference summary.json")->required();
  compare->add_option("test", test_file, "compared summary.json")->required();

  auto* dump = app.add_subcommand("dump-maps", "write the active maps and efficiency tables");
  add_common(dump);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try
  {
    if (*run)
      return cmd_run(common);
    if (*batch)
      return cmd_batch(common, n, seed, threads);
    if (*compare)
      return cmd_compare(base_file, test_file);
    if (*dump)
      return cmd_dump_maps(common);
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kCaseFailure;
  }
  return kOk;
}
