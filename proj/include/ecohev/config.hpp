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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecohev/planner.hpp"
#include "ecohev/powertrain.hpp"
#include "ecohev/thermal.hpp"
#include "ecohev/traffic.hpp"

namespace ecohev::harness
{

using nlohmann::json;

enum class ControllerKind
{
  RuleBased,
  DP
};

enum class PlannerKind
{
  Baseline,
  Eco
};

std::string_view to_string(ControllerKind c);
std::string_view to_string(PlannerKind p);
/// "rule"/"dp" and "baseline"/"eco"; throws ConfigError otherwise.
ControllerKind parse_controller(std::string_view s);
PlannerKind parse_planner(std::string_view s);

struct PowertrainConfig
{
  powertrain::VehicleParams vehicle;
  powertrain::BatteryParams battery;
  powertrain::SocModelParams soc_model;
  powertrain::RuleBasedParams rules;
  powertrain::EngineMaps engine;
  double p_aux = 1700.0;  ///< W
  bool ac_on = true;
};

struct ThermalConfig
{
  thermal::ThermalParams params;
  thermal::EmissionMaps emissions;
  double t_amb = 30.0;  ///< deg C
};

struct DpSettings
{
  double soc_min = 0.40;
  double soc_max = 0.80;
  double soc_step = 0.005;
  double p_bat_step = 500.0;  ///< W
  double terminal_weight = 5000.0;
  /// g per unit SOC; unset means the fuel-equivalent value of the pack energy.
  std::optional<double> terminal_linear_weight;

  std::vector<double> soc_grid() const;
  std::vector<double> p_bat_grid(const powertrain::BatteryParams& battery) const;
  void validate() const;
};

struct InitialConditions
{
  double v0 = 14.0;       ///< m/s
  double soc0 = 0.6;
  double t_cl0 = 70.0;    ///< deg C
  double t_cat0 = 50.0;   ///< deg C
  double entry_time = 0.0;  ///< s, absolute time the vehicle enters the corridor
};

struct BatchSettings
{
  int n = 50;
  std::uint64_t seed = 7;
  double v0_min_kmh = 48.0;
  double v0_max_kmh = 58.0;
  double entry_interval = 11.0;  ///< s between successive vehicle entries
};

struct Scenario
{
  traffic::Corridor corridor;
  PowertrainConfig powertrain;
  ThermalConfig thermal;
  DpSettings dp;
  planner::PlannerOptions eco;
  double a_max = 2.0;
  double a_min = -3.0;
  ControllerKind controller = ControllerKind::RuleBased;
  PlannerKind planner = PlannerKind::Baseline;
  InitialConditions initial;
  BatchSettings batch;
  std::map<std::string, std::string> digests;  ///< config file name -> FNV-1a 64 hex digest

  void validate() const;
};

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

/// Parse JSON text allowing comments; throws ConfigError with the origin on failure.
json parse_config_text(const std::string& text, const std::string& origin);

traffic::Corridor corridor_from_json(const json& j);
json corridor_to_json(const traffic::Corridor& c);
PowertrainConfig powertrain_from_json(const json& j, const json& engine_maps);
ThermalConfig thermal_from_json(const json& j, const json& emission_maps);
powertrain::EngineMaps engine_maps_from_json(const json& j);
thermal::EmissionMaps emission_maps_from_json(const json& j);
json engine_maps_to_json(const powertrain::EngineMaps& m);
json emission_maps_to_json(const thermal::EmissionMaps& m);
json efficiency_curves_to_json(const thermal::CatalystCurves& c, double t_lo, double t_hi, double step);

/// Load a scenario and every file it references (paths relative to the scenario file).
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ecohev::harness
