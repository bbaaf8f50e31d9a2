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
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecohev/config.hpp"
#include "ecohev/errors.hpp"

namespace ecohev::harness
{

/// A case that failed mid-simulation, with the step and the state at failure.
class CaseFailure : public Error
{
public:
  CaseFailure(long step, const std::string& snapshot, const std::string& cause);
  long step() const { return step_; }

private:
  long step_;
};

struct SeriesRow
{
  double t = 0.0;
  double v = 0.0;
  planner::DriveMode mode = planner::DriveMode::Cruise;
  double p_trac = 0.0;
  powertrain::EngineMode e_mode = powertrain::EngineMode::Off;
  double p_bat = 0.0;
  double p_eng = 0.0;
  double soc = 0.0;
  double t_cl = 0.0;
  double t_cat = 0.0;
  thermal::EmissionRates engine_out;  ///< g/s
  thermal::EmissionRates tailpipe;    ///< g/s

  bool operator==(const SeriesRow&) const = default;
};

/// Column order of the time-series CSV.
inline constexpr std::array<std::string_view, 16> kSeriesColumns{
    "t", "v", "mode", "P_trac", "e_mode", "P_bat", "P_eng", "SOC",
    "T_cl", "T_cat", "hc_eo", "co_eo", "nox_eo", "hc_tp", "co_tp", "nox_tp"};

struct CaseResult
{
  ControllerKind controller = ControllerKind::RuleBased;
  PlannerKind planner = PlannerKind::Baseline;
  double v0 = 0.0;
  double entry_time = 0.0;
  double duration = 0.0;  ///< s
  double distance = 0.0;  ///< m
  double fuel_g = 0.0;
  double soc0 = 0.0;
  double soc_final = 0.0;
  double delta_soc = 0.0;
  double equivalent_energy_kwh = 0.0;
  thermal::EmissionRates engine_out_g;
  thermal::EmissionRates tailpipe_g;
  double mean_t_cl = 0.0;
  double mean_t_cat = 0.0;
  double final_t_cl = 0.0;
  double final_t_cat = 0.0;
  double light_off_time = 0.0;  ///< s from entry; trip duration when never reached
  bool light_off_reached = false;
  int stops = 0;
  int engine_starts = 0;
  int soc_saturations = 0;
  std::vector<SeriesRow> series;  ///< one row per simulated second

  bool operator==(const CaseResult&) const = default;
};

/// Fuel energy plus the SOC deficit priced as battery energy, kWh.
double equivalent_energy(double fuel_g, double delta_soc, double fuel_lhv, double capacity_kwh);

/// Percent improvement (z_base - z_test) / z_base * 100; empty when z_base is zero.
std::optional<double> emission_improvement(double z_base, double z_test);

/// Speed profile of the whole corridor trip for the scenario's planner.
planner::SpeedProfile plan_trip(const Scenario& scenario);

/// One vehicle through the corridor: plan, split power, then thermal and emissions.
CaseResult run_case(const Scenario& scenario);

struct Combination
{
  PlannerKind planner;
  ControllerKind controller;
};

/// Baseline+RuleBased first: it is the reference of every comparison.
inline constexpr std::array<Combination, 4> kCombinations{{{PlannerKind::Baseline, ControllerKind::RuleBased},
                                                           {PlannerKind::Eco, ControllerKind::RuleBased},
                                                           {PlannerKind::Baseline, ControllerKind::DP},
                                                           {PlannerKind::Eco, ControllerKind::DP}}};
std::size_t combination_index(PlannerKind planner, ControllerKind controller);
std::string combination_name(const Combination& c);

struct VehicleCase
{
  int index = 0;
  double v0 = 0.0;
  double entry_time = 0.0;
  std::array<std::optional<CaseResult>, 4> results;  ///< by kCombinations order
  std::array<std::string, 4> errors;

  bool operator==(const VehicleCase&) const = default;
};

struct CombinationMeans
{
  int completed = 0;
  double energy_kwh = 0.0;
  double fuel_g = 0.0;
  double delta_soc = 0.0;
  double mean_t_cl = 0.0;
  double mean_t_cat = 0.0;
  double light_off_time = 0.0;
  int light_off_censored = 0;
  double saving_pct = 0.0;  ///< mean per-case energy saving against Baseline+RuleBased
  thermal::EmissionRates engine_out_g;
  thermal::EmissionRates tailpipe_g;
  thermal::EmissionRates improvement_pct;  ///< mean per-case tailpipe improvement against Baseline+RuleBased
  std::array<int, 3> improvement_excluded{0, 0, 0};  ///< cases with a zero baseline

  bool operator==(const CombinationMeans&) const = default;
};

struct BatchResult
{
  int n = 0;
  std::uint64_t seed = 0;
  double t_cat0 = 0.0;
  std::vector<VehicleCase> cases;
  std::array<CombinationMeans, 4> means;
  int failures = 0;
  int dp_dominance_violations = 0;  ///< Eco+DP energy above Eco+RuleBased
  std::map<std::string, std::string> digests;

  bool operator==(const BatchResult&) const = default;
};

struct BatchOptions
{
  int threads = 1;
  bool keep_series = false;
};

/// n vehicles with seeded initial speeds, every combination each; failures are recorded, not thrown.
BatchResult run_batch(const Scenario& scenario, int n, std::uint64_t seed, const BatchOptions& opts = {});

/// Recompute batch means, failures and dominance counts from the per-case results.
void aggregate(BatchResult& batch);

json case_to_json(const CaseResult& c);
CaseResult case_from_json(const json& j);
json batch_to_json(const BatchResult& b);
BatchResult batch_from_json(const json& j);

void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(std::istream& is);
/// One row per vehicle and combination with the case scalars.
void write_cases_csv(std::ostream& os, const BatchResult& batch);
/// Write text to a file, reporting the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ecohev::harness
