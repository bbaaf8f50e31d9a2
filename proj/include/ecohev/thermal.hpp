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
#include <string_view>

#include "ecohev/interp.hpp"

namespace ecohev::thermal
{

enum class Species : int
{
  HC = 0,
  CO = 1,
  NOx = 2
};

inline constexpr std::array<Species, 3> kAllSpecies{Species::HC, Species::CO, Species::NOx};
std::string_view to_string(Species s);

/// Mass flows in g/s (or cumulative grams when integrated).
struct EmissionRates
{
  double hc = 0.0;
  double co = 0.0;
  double nox = 0.0;

  double& operator[](Species s);
  double operator[](Species s) const;
  EmissionRates& operator+=(const EmissionRates& o);
  friend EmissionRates operator*(const EmissionRates& r, double k) { return {r.hc * k, r.co * k, r.nox * k}; }
  bool operator==(const EmissionRates&) const = default;
};

/// Logistic light-off curve; eta(t50) = eta_max / 2.
struct EfficiencyCurve
{
  double t50 = 200.0;        ///< deg C
  double steepness = 0.05;   ///< 1/deg C
  double eta_max = 0.99;

  void validate() const;
};

double conversion_efficiency(double t_cat, const EfficiencyCurve& curve);

struct CatalystCurves
{
  EfficiencyCurve hc{250.0, 0.1, 0.99};
  EfficiencyCurve co{200.0, 0.05, 0.99};
  EfficiencyCurve nox{200.0, 0.05, 0.99};

  const EfficiencyCurve& operator[](Species s) const;
};

struct ThermalParams
{
  double engine_thermal_mass = 150e3;  ///< M_e*C_e, J/K
  double cat_thermal_mass = 4000.0;    ///< J/K
  double thermostat_temp = 90.0;       ///< deg C
  double radiator_gain = 1500.0;       ///< W/K above the thermostat
  double conv_coeff_base = 15.0;       ///< W/K
  double conv_coeff_speed = 1.5;       ///< W/K per m/s
  double exhaust_heat_fraction = 0.30;
  double coolant_heat_fraction = 0.30;
  double fuel_lhv = 43000.0;           ///< J/g
  double stoich_afr = 14.7;
  double exhaust_cp = 1.1;             ///< J/(g K)
  double cat_ambient_loss = 3.0;       ///< W/K
  EmissionRates reaction_enthalpy{40000.0, 10000.0, 0.0};  ///< J per g converted
  CatalystCurves curves;

  void validate() const;
};

struct ThermalState
{
  double t_cl = 70.0;   ///< deg C
  double t_cat = 50.0;  ///< deg C
};

struct HeatFlows
{
  double q_fuel = 0.0;         ///< W
  double q_exh = 0.0;          ///< W
  double q_air = 0.0;          ///< W
  double q_rad = 0.0;          ///< W
  double exhaust_flow = 0.0;   ///< g/s
  double exhaust_temp = 0.0;   ///< deg C
};

/**
 * Heat terms of the coolant balance plus the exhaust stream that feeds the
 * catalyst. The exhaust leaves the block at the coolant temperature plus the
 * rise carried by Q_exh, never colder than ambient.
 */
HeatFlows heat_split(double fuel_rate, double p_eng, const ThermalParams& params, double t_cl, double t_amb, double v);

/// Coolant temperature after one 1 s step (no cabin heating).
double coolant_step(const ThermalState& state, const HeatFlows& heat, double p_eng, const ThermalParams& params);

/// Lumped catalyst brick temperature after one 1 s step.
double catalyst_step(const ThermalState& state, double exhaust_flow, double exhaust_temp,
                     const EmissionRates& engine_out, double t_amb, const ThermalParams& params);

/// Static engine-out maps over (engine speed rad/s, engine power W).
class EmissionMaps
{
public:
  EmissionMaps() = default;
  EmissionMaps(GridMap2D hc, GridMap2D co, GridMap2D nox);

  /// Zero when the engine is off (0, 0); throws OutOfEnvelope outside the grid.
  EmissionRates engine_out(double omega, double p_eng) const;
  const GridMap2D& map(Species s) const;

private:
  GridMap2D hc_, co_, nox_;
};

EmissionRates tailpipe_step(const EmissionRates& engine_out, double t_cat, const CatalystCurves& curves);

}  // namespace ecohev::thermal
