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
#include "ecohev/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecohev::thermal
{

std::string_view to_string(Species s)
{
  switch (s)
  {
    case Species::HC:
      return "HC";
    case Species::CO:
      return "CO";
    case Species::NOx:
      return "NOx";
  }
  return "?";
}

double& EmissionRates::operator[](Species s)
{
  return s == Species::HC ? hc : s == Species::CO ? co : nox;
}

double EmissionRates::operator[](Species s) const
{
  return s == Species::HC ? hc : s == Species::CO ? co : nox;
}

EmissionRates& EmissionRates::operator+=(const EmissionRates& o)
{
  hc += o.hc;
  co += o.co;
  nox += o.nox;
  return *this;
}

void EfficiencyCurve::validate() const
{
  if (!(steepness > 0.0))
    throw std::invalid_argument("efficiency curve steepness must be positive");
  if (!(eta_max > 0.0 && eta_max <= 1.0))
    throw std::invalid_argument("efficiency curve eta_max must lie in (0, 1]");
}

double conversion_efficiency(double t_cat, const EfficiencyCurve& curve)
{
  double z = -curve.steepness * (t_cat - curve.t50);
  if (z > 700.0)
    return 0.0;
  return curve.eta_max / (1.0 + std::exp(z));
}

const EfficiencyCurve& CatalystCurves::operator[](Species s) const
{
  return s == Species::HC ? hc : s == Species::CO ? co : nox;
}

void ThermalParams::validate() const
{
  for (double x : {engine_thermal_mass, cat_thermal_mass, thermostat_temp, radiator_gain, conv_coeff_base,
                   conv_coeff_speed, exhaust_heat_fraction, coolant_heat_fraction, fuel_lhv, stoich_afr, exhaust_cp,
                   cat_ambient_loss})
    if (!(x > 0.0))
      throw std::invalid_argument("thermal parameters must be positive");
  if (!(coolant_heat_fraction + exhaust_heat_fraction < 1.0))
    throw std::invalid_argument("coolant and exhaust heat fractions must sum below one");
  for (Species s : kAllSpecies)
  {
    curves[s].validate();
    if (reaction_enthalpy[s] < 0.0)
      throw std::invalid_argument("reaction enthalpies must be non-negative");
  }
}

HeatFlows heat_split(double fuel_rate, double p_eng, const ThermalParams& p, double t_cl, double t_amb, double v)
{
  if (fuel_rate < 0.0 || p_eng < 0.0)
    throw std::invalid_argument("heat_split needs non-negative fuel rate and engine power");
  HeatFlows h;
  h.q_fuel = fuel_rate * p.fuel_lhv;
  h.q_exh = p.exhaust_heat_fraction * h.q_fuel;
  h.q_air = (p.conv_coeff_base + p.conv_coeff_speed * v) * (t_cl - t_amb);
  h.q_rad = p.radiator_gain * std::max(0.0, t_cl - p.thermostat_temp);
  h.exhaust_flow = fuel_rate * (1.0 + p.stoich_afr);
  h.exhaust_temp = t_amb;
  if (h.exhaust_flow > 0.0)
    h.exhaust_temp = std::max(t_amb, t_cl + h.q_exh / (h.exhaust_flow * p.exhaust_cp));
  return h;
}

double coolant_step(const ThermalState& s, const HeatFlows& h, double p_eng, const ThermalParams& p)
{
  return s.t_cl + (h.q_fuel - p_eng - h.q_exh - h.q_air - h.q_rad) / p.engine_thermal_mass;
}

double catalyst_step(const ThermalState& s, double flow, double exhaust_temp, const EmissionRates& engine_out,
                     double t_amb, const ThermalParams& p)
{
  if (flow < 0.0)
    throw std::invalid_argument("exhaust flow must be non-negative");
  double q_reaction = 0.0;
  for (Species sp : kAllSpecies)
    q_reaction += engine_out[sp] * conversion_efficiency(s.t_cat, p.curves[sp]) * p.reaction_enthalpy[sp];
  double q_gas = p.exhaust_cp * flow * (exhaust_temp - s.t_cat);
  double q_loss = p.cat_ambient_loss * (s.t_cat - t_amb);
  return s.t_cat + (q_gas + q_reaction - q_loss) / p.cat_thermal_mass;
}

EmissionMaps::EmissionMaps(GridMap2D hc, GridMap2D co, GridMap2D nox)
  : hc_(std::move(hc)), co_(std::move(co)), nox_(std::move(nox))
{
  for (const GridMap2D* m : {&hc_, &co_, &nox_})
    if (std::any_of(m->values().begin(), m->values().end(), [](double x) { return x < 0.0; }))
      throw std::invalid_argument("emission maps must be non-negative");
}

EmissionRates EmissionMaps::engine_out(double omega, double p_eng) const
{
  if (omega == 0.0 && p_eng == 0.0)
    return {};
  return {hc_(omega, p_eng), co_(omega, p_eng), nox_(omega, p_eng)};
}

const GridMap2D& EmissionMaps::map(Species s) const
{
  return s == Species::HC ? hc_ : s == Species::CO ? co_ : nox_;
}

EmissionRates tailpipe_step(const EmissionRates& eo, double t_cat, const CatalystCurves& curves)
{
  EmissionRates out;
  for (Species s : kAllSpecies)
    out[s] = eo[s] * (1.0 - conversion_efficiency(t_cat, curves[s]));
  return out;
}

}  // namespace ecohev::thermal
