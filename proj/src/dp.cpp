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
#include "ecohev/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ecohev/errors.hpp"

namespace ecohev::dp
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
// Interpolation weights this close to a node snap onto it, so grid-aligned
// transitions never pick up an infinite neighbour through rounding.
constexpr double kSnap = 1e-9;

using powertrain::ControlDecision;
using powertrain::EngineMode;
using powertrain::EngineOp;

double interpolate(const std::vector<double>& grid, const std::vector<double>& value, double x)
{
  const double h0 = grid[1] - grid[0];
  const double hn = grid.back() - grid[grid.size() - 2];
  if (x < grid.front())
    return x >= grid.front() - kSnap * h0 ? value.front() : kInf;
  if (x > grid.back())
    return x <= grid.back() + kSnap * hn ? value.back() : kInf;
  std::size_t i = bracket(grid, x);
  double u = (x - grid[i]) / (grid[i + 1] - grid[i]);
  if (u <= kSnap)
    return value[i];
  if (u >= 1.0 - kSnap)
    return value[i + 1];
  if (value[i] == kInf || value[i + 1] == kInf)
    return kInf;
  return value[i] + u * (value[i + 1] - value[i]);
}

// Step candidates before the state-dependent saturation check.
std::vector<Candidate> step_candidates(int k, const DpProblem& pb)
{
  std::vector<Candidate> off;
  const double demand = pb.demand[static_cast<std::size_t>(k)] + pb.p_aux;
  const auto& bat = pb.battery;

  if (demand >= bat.p_bat_min && demand <= bat.p_bat_max)
  {
    const double full = demand;
    auto add_off = [&](double p_bat) {
      Candidate c;
      c.control = {EngineMode::Off, p_bat};
      c.delta_soc = pb.soc_model.delta(p_bat - pb.p_aux, pb.p_aux, pb.ac_on);
      off.push_back(c);
    };
    add_off(full);
    // While braking, the friction brakes may take any share of the regen power.
    if (pb.friction_blending && full < pb.p_aux)
      for (double p_bat : pb.p_bat_grid)
        if (p_bat > full && p_bat <= pb.p_aux)
          add_off(p_bat);
  }

  std::vector<Candidate> on;
  for (double p_bat : pb.p_bat_grid)
  {
    if (p_bat < bat.p_bat_min || p_bat > bat.p_bat_max)
      continue;
    double p_eng = demand - p_bat;
    if (!(p_eng > 0.0) || p_eng > pb.engine.p_max())
      continue;
    Candidate c;
    c.control = {EngineMode::On, p_bat};
    c.engine = pb.engine.operate(p_eng);
    c.delta_soc = pb.soc_model.delta(p_bat - pb.p_aux, pb.p_aux, pb.ac_on);
    on.push_back(c);
  }
  auto by_power = [](const Candidate& a, const Candidate& b) {
    double x = std::abs(a.control.p_bat), y = std::abs(b.control.p_bat);
    return x != y ? x < y : a.control.p_bat < b.control.p_bat;
  };
  std::stable_sort(off.begin(), off.end(), by_power);
  std::stable_sort(on.begin(), on.end(), by_power);
  off.insert(off.end(), on.begin(), on.end());
  return off;
}

bool admissible(double soc, const Candidate& c, const powertrain::SocModelParams& m)
{
  double next = soc + c.delta_soc;
  return next >= m.soc_min - kSnap * 1e-3 && next <= m.soc_max + kSnap * 1e-3;
}

}  // namespace

double TerminalCost::operator()(double soc) const
{
  double e = soc - soc_target;
  return -linear_weight * e + weight * e * e;
}

void DpProblem::validate() const
{
  if (demand.empty())
    throw std::invalid_argument("DP horizon must be at least one step");
  if (soc_grid.size() < 2 || !strictly_increasing(soc_grid))
    throw std::invalid_argument("SOC grid must have at least two strictly increasing points");
  if (p_bat_grid.empty() || !strictly_increasing(p_bat_grid))
    throw std::invalid_argument("battery power grid must be strictly increasing");
  if (!(soc0 >= soc_grid.front() && soc0 <= soc_grid.back()))
    throw std::invalid_argument("soc0 must lie within the SOC grid span");
  if (terminal.weight < 0.0)
    throw std::invalid_argument("terminal weight must be non-negative");
  soc_model.validate();
  battery.validate();
  if (engine.fuel_map().empty())
    throw std::invalid_argument("DP problem needs engine maps");
}

std::vector<Candidate> feasible_controls(int k, double soc, const DpProblem& problem)
{
  if (k < 0 || k >= problem.horizon())
    throw std::invalid_argument("step index outside the horizon");
  auto all = step_candidates(k, problem);
  std::vector<Candidate> out;
  for (const auto& c : all)
    if (admissible(soc, c, problem.soc_model))
      out.push_back(c);
  return out;
}

double DpSolution::total_fuel() const
{
  return std::accumulate(fuel.begin(), fuel.end(), 0.0);
}

DpSolution solve(const DpProblem& pb, const SolveOptions& opts, DpTables* tables)
{
  pb.validate();
  const int K = pb.horizon();
  const auto& grid = pb.soc_grid;
  const std::size_t n = grid.size();

  std::vector<std::vector<Candidate>> cands(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    cands[static_cast<std::size_t>(k)] = step_candidates(k, pb);

  std::vector<std::vector<double>> value(static_cast<std::size_t>(K) + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> policy;
  if (opts.keep_tables)
    policy.assign(static_cast<std::size_t>(K), std::vector<int>(n, -1));

  for (std::size_t i = 0; i < n; ++i)
    value[static_cast<std::size_t>(K)][i] = pb.terminal(grid[i]);

  for (int k = K - 1; k >= 0; --k)
  {
    const auto& next_value = value[static_cast<std::size_t>(k) + 1];
    auto& cur = value[static_cast<std::size_t>(k)];
    const auto& list = cands[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < n; ++i)
    {
      double best = kInf;
      int arg = -1;
      for (std::size_t c = 0; c < list.size(); ++c)
      {
        if (!admissible(grid[i], list[c], pb.soc_model))
          continue;
        double cost = list[c].engine.fuel_rate + interpolate(grid, next_value, grid[i] + list[c].delta_soc);
        if (cost < best)
        {
          best = cost;
          arg = static_cast<int>(c);
        }
      }
      cur[i] = best;
      if (opts.keep_tables)
        policy[static_cast<std::size_t>(k)][i] = arg;
    }
  }

  if (tables != nullptr)
  {
    tables->soc_grid = grid;
    tables->value = value;
    tables->policy = std::move(policy);
    tables->candidates = cands;
  }

  DpSolution sol;
  sol.soc_target = pb.terminal.soc_target;
  sol.value_estimate = interpolate(grid, value[0], pb.soc0);
  sol.soc.push_back(pb.soc0);
  double soc = pb.soc0;
  for (int k = 0; k < K; ++k)
  {
    const auto& list = cands[static_cast<std::size_t>(k)];
    const auto& next_value = value[static_cast<std::size_t>(k) + 1];
    double best = kInf;
    const Candidate* pick = nullptr;
    for (const auto& c : list)
    {
      if (!admissible(soc, c, pb.soc_model))
        continue;
      double cost = c.engine.fuel_rate + interpolate(grid, next_value, soc + c.delta_soc);
      if (cost < best)
      {
        best = cost;
        pick = &c;
      }
    }
    if (pick == nullptr)
      throw NoFeasiblePolicy("no finite-cost control at step " + std::to_string(k) + " from SOC " +
                             std::to_string(soc));
    soc = std::clamp(soc + pick->delta_soc, pb.soc_model.soc_min, pb.soc_model.soc_max);
    sol.controls.push_back(pick->control);
    sol.engine.push_back(pick->engine);
    sol.fuel.push_back(pick->engine.fuel_rate);
    sol.soc.push_back(soc);
  }
  sol.value = trajectory_cost(pb, sol.soc, sol.fuel);

  return sol;
}

double trajectory_cost(const DpProblem& problem, const std::vector<double>& soc, const std::vector<double>& fuel)
{
  if (soc.empty())
    throw std::invalid_argument("trajectory needs at least the initial SOC");
  return std::accumulate(fuel.begin(), fuel.end(), 0.0) + problem.terminal(soc.back());
}

bool charge_sustain_check(const DpSolution& solution, double band)
{
  if (solution.soc.empty())
    throw std::invalid_argument("empty DP solution");
  return std::abs(solution.soc.back() - solution.soc_target) <= band;
}

void write_tables_csv(std::ostream& os, const DpTables& t)
{
  os << "k,soc,value,e_mode,p_bat\n";
  for (std::size_t k = 0; k < t.value.size(); ++k)
  {
    for (std::size_t i = 0; i < t.soc_grid.size(); ++i)
    {
      os << k << ',' << t.soc_grid[i] << ',' << t.value[k][i];
      int arg = k < t.policy.size() ? t.policy[k][i] : -1;
      if (arg >= 0)
      {
        const auto& c = t.candidates[k][static_cast<std::size_t>(arg)];
        os << ',' << static_cast<int>(c.control.e_mode) << ',' << c.control.p_bat;
      }
      else
      {
        os << ",,";
      }
      os << '\n';
    }
  }
}

}  // namespace ecohev::dp
