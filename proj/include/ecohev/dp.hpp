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

#include <iosfwd>
#include <vector>

#include "ecohev/powertrain.hpp"

namespace ecohev::dp
{

/**
 * Terminal cost on the final SOC:
 *   linear_weight * (soc_target - soc) + weight * (soc - soc_target)^2
 * The linear part prices the SOC deficit as energy; the quadratic part holds
 * the end state near the target.
 */
struct TerminalCost
{
  double soc_target = 0.6;
  double weight = 0.0;         ///< g per squared SOC fraction
  double linear_weight = 0.0;  ///< g per SOC fraction

  double operator()(double soc) const;
};

struct DpProblem
{
  std::vector<double> demand;  ///< P_trac per step, W
  double p_aux = 1700.0;       ///< W
  bool ac_on = true;
  double soc0 = 0.6;
  /// Allow braking steps to send part of the regen power to the friction brakes.
  bool friction_blending = false;
  std::vector<double> soc_grid;    ///< strictly increasing fractions
  std::vector<double> p_bat_grid;  ///< strictly increasing W
  TerminalCost terminal;
  powertrain::SocModelParams soc_model;
  powertrain::EngineMaps engine;
  powertrain::BatteryParams battery;

  int horizon() const { return static_cast<int>(demand.size()); }
  void validate() const;
};

struct Candidate
{
  powertrain::ControlDecision control;
  powertrain::EngineOp engine;
  double delta_soc = 0.0;
};

/**
 * Admissible controls at step k from state soc: engine off with the demand fully
 * electric (when the battery can carry it), with friction blending also engine off
 * with part of the braking power sent to the friction brakes (battery-power grid
 * points between full regen and the auxiliary load), and engine on for every
 * battery-power grid point that
 * leaves a positive engine power up to the maximum. Transitions that saturate the
 * SOC model are excluded. Ordered engine-off first, then by |p_bat|.
 */
std::vector<Candidate> feasible_controls(int k, double soc, const DpProblem& problem);

struct DpSolution
{
  std::vector<powertrain::ControlDecision> controls;
  std::vector<powertrain::EngineOp> engine;
  std::vector<double> soc;   ///< horizon + 1 states
  std::vector<double> fuel;  ///< g per step
  double soc_target = 0.0;
  double value = 0.0;            ///< fuel + terminal cost of the re-simulated trajectory
  double value_estimate = 0.0;   ///< cost-to-go interpolated at soc0
  double total_fuel() const;
};

struct SolveOptions
{
  bool keep_tables = false;  ///< retain value and policy tables for inspection
};

struct DpTables
{
  std::vector<double> soc_grid;
  std::vector<std::vector<double>> value;   ///< [k][i], k = 0..K
  std::vector<std::vector<int>> policy;     ///< [k][i] candidate index, -1 if infeasible
  std::vector<std::vector<Candidate>> candidates;  ///< state-independent per-step lists
};

/// Backward value iteration with linear cost-to-go interpolation, then a forward re-simulation.
DpSolution solve(const DpProblem& problem, const SolveOptions& opts = {}, DpTables* tables = nullptr);

/// Cost of an arbitrary control trajectory under the problem's models (infinity if it leaves the grid span).
double trajectory_cost(const DpProblem& problem, const std::vector<double>& soc, const std::vector<double>& fuel);

bool charge_sustain_check(const DpSolution& solution, double band);

/// value and policy tables as long-format CSV (k, soc, value, e_mode, p_bat).
void write_tables_csv(std::ostream& os, const DpTables& tables);

}  // namespace ecohev::dp
