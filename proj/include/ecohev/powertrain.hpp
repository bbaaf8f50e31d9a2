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
#include <vector>

#include "ecohev/interp.hpp"
#include "ecohev/planner.hpp"

namespace ecohev::powertrain
{

inline constexpr double kGravity = 9.81;

/// Road-load and driveline data for the longitudinal model.
struct VehicleParams
{
  double mass = 1530.0;              ///< kg
  double drag_area = 0.58;           ///< Cd*A, m^2
  double rolling_coeff = 0.009;
  double air_density = 1.2;          ///< kg/m^3
  double driveline_efficiency = 0.9;
  double regen_efficiency = 0.7;     ///< share of negative wheel power recovered
  double regen_power_limit = 25000;  ///< W, magnitude of the battery charge limit

  void validate() const;
};

/**
 * Switching quadratic battery model, one 1 s step:
 *   A/C on : dSOC = x1 P + x2 P^2 + x3 P Paux + x4 Paux + x5 Paux^2 + x6
 *   A/C off: dSOC = x7 P + x8 P^2 + x9
 * with P the motor/generator electrical power in W (positive = discharge).
 */
struct SocModelParams
{
  std::array<double, 9> xi{};
  double soc_min = 0.4;
  double soc_max = 0.8;

  double delta(double p_mg, double p_aux, bool ac_on) const;
  void validate() const;
  /// dSOC/dP < 0 on [p_mg_lo, p_mg_hi] for both branches.
  bool discharge_monotone(double p_mg_lo, double p_mg_hi, double p_aux) const;
};

struct PowertrainState
{
  double soc = 0.6;
};

struct SocStepResult
{
  PowertrainState state;
  bool saturated = false;
};

enum class EngineMode : int
{
  Off = 1,
  On = 2
};

struct ControlDecision
{
  EngineMode e_mode = EngineMode::Off;
  double p_bat = 0.0;  ///< W, positive = discharge
};

struct EngineOp
{
  double omega = 0.0;      ///< rad/s
  double p_eng = 0.0;      ///< W
  double fuel_rate = 0.0;  ///< g/s
};

struct BatteryParams
{
  double capacity_kwh = 1.3;
  double p_bat_min = -25000.0;  ///< W, charge limit
  double p_bat_max = 25000.0;   ///< W, discharge limit

  void validate() const;
};

/// Engine operating line and fuel map. Immutable after construction.
class EngineMaps
{
public:
  EngineMaps() = default;
  EngineMaps(double p_max, LinearTable ool, GridMap2D fuel_map);

  /// Engine speed on the optimal operating line; p_eng must be in (0, p_max].
  double optimal_operating_line(double p_eng) const;
  /// Fuel mass flow. (0, 0) is the engine-off point and burns nothing.
  double fuel_rate(double omega, double p_eng) const;
  /// Engine-on operating point for the requested output power.
  EngineOp operate(double p_eng) const;

  double p_max() const { return p_max_; }
  const LinearTable& ool() const { return ool_; }
  const GridMap2D& fuel_map() const { return fuel_; }

private:
  double p_max_ = 0.0;
  LinearTable ool_;
  GridMap2D fuel_;
};

/// Thresholds of the production-style rule-based power split.
struct RuleBasedParams
{
  double soc_target = 0.6;
  double soc_low = 0.58;           ///< engine forced on while moving below this
  double p_on_threshold = 12000;   ///< W traction demand that starts the engine
  double p_off_threshold = 8000;   ///< W traction demand below which a running engine may stop
  double charge_gain = 1.0e6;      ///< W of charging per unit SOC below target
  double p_charge_min = 3000;      ///< W, charging floor below target so the target is reached
  double p_charge_max = 8000;      ///< W
  double p_eng_min = 4000;         ///< W, lowest engine output once running
};

struct SplitResult
{
  ControlDecision decision;
  EngineOp engine;
};

/**
 * Traction power at the battery/engine side for each 1 s interval of the
 * profile (size() - 1 values). Road load uses the mean speed of the interval;
 * braking power is scaled by the regen efficiency and floored at the charge limit.
 */
std::vector<double> traction_power(const planner::SpeedProfile& profile, const VehicleParams& params);

SocStepResult soc_step(PowertrainState state, double p_mg, double p_aux, bool ac_on, const SocModelParams& params);

/**
 * Threshold power split with start/stop hysteresis on the previous engine mode.
 * Throws InfeasibleDemand when engine and battery together cannot meet the demand.
 */
SplitResult rule_based_split(double p_trac, double p_aux, double v, PowertrainState state, const RuleBasedParams& rules,
                             const EngineMaps& engine, const BatteryParams& battery,
                             EngineMode previous = EngineMode::Off);

}  // namespace ecohev::powertrain
