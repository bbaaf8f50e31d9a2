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
#include "ecohev/powertrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ecohev/errors.hpp"

namespace ecohev::powertrain
{

void VehicleParams::validate() const
{
  if (!(mass > 0 && drag_area > 0 && rolling_coeff > 0 && air_density > 0 && regen_power_limit > 0))
    throw std::invalid_argument("vehicle parameters must be positive");
  if (!(driveline_efficiency > 0 && driveline_efficiency <= 1))
    throw std::invalid_argument("driveline efficiency must lie in (0, 1]");
  if (!(regen_efficiency >= 0 && regen_efficiency <= 1))
    throw std::invalid_argument("regen efficiency must lie in [0, 1]");
}

double SocModelParams::delta(double p_mg, double p_aux, bool ac_on) const
{
  const auto& x = xi;
  if (ac_on)
    return x[0] * p_mg + x[1] * p_mg * p_mg + x[2] * p_mg * p_aux + x[3] * p_aux + x[4] * p_aux * p_aux + x[5];
  return x[6] * p_mg + x[7] * p_mg * p_mg + x[8];
}

void SocModelParams::validate() const
{
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
    throw std::invalid_argument("SOC bounds must satisfy 0 <= soc_min < soc_max <= 1");
}

bool SocModelParams::discharge_monotone(double lo, double hi, double p_aux) const
{
  const auto& x = xi;
  // both derivatives are affine in P, so the endpoints decide
  for (double p : {lo, hi})
  {
    if (!(x[0] + 2.0 * x[1] * p + x[2] * p_aux < 0.0))
      return false;
    if (!(x[6] + 2.0 * x[7] * p < 0.0))
      return false;
  }
  return true;
}

void BatteryParams::validate() const
{
  if (!(capacity_kwh > 0.0))
    throw std::invalid_argument("battery capacity must be positive");
  if (!(p_bat_min < 0.0 && p_bat_max > 0.0))
    throw std::invalid_argument("battery envelope must straddle zero");
}

EngineMaps::EngineMaps(double p_max, LinearTable ool, GridMap2D fuel_map)
  : p_max_(p_max), ool_(std::move(ool)), fuel_(std::move(fuel_map))
{
  if (!(p_max_ > 0.0))
    throw std::invalid_argument("engine max power must be positive");
  if (ool_.x_min() > 0.0 || ool_.x_max() < p_max_)
    throw std::invalid_argument("operating line must span (0, p_max]");
  if (!std::is_sorted(ool_.y().begin(), ool_.y().end()))
    throw std::invalid_argument("operating line speed must be nondecreasing in power");
}

double EngineMaps::optimal_operating_line(double p_eng) const
{
  if (p_eng > p_max_)
    throw OutOfEnvelope("engine power " + std::to_string(p_eng) + " W above maximum " + std::to_string(p_max_));
  if (!(p_eng > 0.0))
    throw std::invalid_argument("operating line needs positive engine power");
  return ool_(p_eng);
}

double EngineMaps::fuel_rate(double omega, double p_eng) const
{
  if (omega == 0.0 && p_eng == 0.0)
    return 0.0;
  if (omega == 0.0 || p_eng == 0.0)
    throw std::invalid_argument("zero engine power is only valid with the engine stopped");
  return fuel_(omega, p_eng);
}

EngineOp EngineMaps::operate(double p_eng) const
{
  double omega = optimal_operating_line(p_eng);
  return {omega, p_eng, fuel_rate(omega, p_eng)};
}

std::vector<double> traction_power(const planner::SpeedProfile& profile, const VehicleParams& params)
{
  params.validate();
  const auto& v = profile.speeds;
  std::vector<double> out;
  if (v.size() < 2)
    return out;
  out.reserve(v.size() - 1);
  const double m = params.mass;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
  {
    double vm = 0.5 * (v[k] + v[k + 1]);
    double a = (v[k + 1] - v[k]) / profile.dt;
    double rolling = vm > 0.0 ? m * kGravity * params.rolling_coeff : 0.0;
    double force = m * a + rolling + 0.5 * params.air_density * params.drag_area * vm * vm;
    double wheel = force * vm;
    if (wheel >= 0.0)
      out.push_back(wheel / params.driveline_efficiency);
    else
      out.push_back(std::max(wheel * params.regen_efficiency, -params.regen_power_limit));
  }
  return out;
}

SocStepResult soc_step(PowertrainState state, double p_mg, double p_aux, bool ac_on, const SocModelParams& params)
{
  double next = state.soc + params.delta(p_mg, p_aux, ac_on);
  if (next < params.soc_min)
    return {{params.soc_min}, true};
  if (next > params.soc_max)
    return {{params.soc_max}, true};
  return {{next}, false};
}

SplitResult rule_based_split(double p_trac, double p_aux, double v, PowertrainState state, const RuleBasedParams& rules,
                             const EngineMaps& engine, const BatteryParams& battery, EngineMode previous)
{
  const double demand = p_trac + p_aux;
  if (demand > engine.p_max() + battery.p_bat_max)
    throw InfeasibleDemand("demand " + std::to_string(demand) + " W exceeds engine plus battery capability");

  bool on = v > 0.0 && (p_trac > rules.p_on_threshold || state.soc < rules.soc_low);
  // a running engine keeps going until demand drops and the charge is restored
  if (previous == EngineMode::On && v > 0.0 && (p_trac > rules.p_off_threshold || state.soc < rules.soc_target))
    on = true;
  if (demand > battery.p_bat_max)
    on = true;
  if (!on)
  {
    double p_bat = std::max(demand, battery.p_bat_min);
    return {{EngineMode::Off, p_bat}, {}};
  }

  double charge = 0.0;
  if (state.soc < rules.soc_target)
    charge = std::clamp(rules.charge_gain * (rules.soc_target - state.soc), rules.p_charge_min, rules.p_charge_max);
  double p_eng = std::clamp(demand + charge, rules.p_eng_min, engine.p_max());
  // never push more charge than the battery accepts
  p_eng = std::min(p_eng, demand - battery.p_bat_min);
  if (p_eng <= 0.0)
    return {{EngineMode::Off, std::max(demand, battery.p_bat_min)}, {}};
  double p_bat = demand - p_eng;
  if (p_bat > battery.p_bat_max)
    throw InfeasibleDemand("battery cannot cover the demand above engine maximum");
  return {{EngineMode::On, p_bat}, engine.operate(p_eng)};
}

}  // namespace ecohev::powertrain
