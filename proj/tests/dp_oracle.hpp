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

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "ecohev/dp.hpp"

namespace ecohev::oracle
{

inline constexpr double kH = 1.0 / 64.0;  // SOC grid spacing
inline constexpr double kDp = 1024.0;     // battery power grid spacing, W
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Problem whose transitions land exactly on SOC nodes: dSOC = -h * p_bat / 1024.
struct AlignedProblem
{
  dp::DpProblem pb;
  int n_soc = 0;     // SOC nodes, index 0 at soc_min
  int i0 = 0;        // index of soc0
  int j_lo = 0;      // battery grid p_bat = j * 1024 for j in [j_lo, j_hi]
  int j_hi = 0;
  std::vector<int> demand_units;  // (P_trac + p_aux) / 1024 per step
};

inline AlignedProblem make_problem(std::mt19937_64& rng, int K, int n_pbat, bool blending)
{
  AlignedProblem a;
  std::uniform_int_distribution<int> half_soc(3, 10);
  int m = half_soc(rng);
  a.n_soc = 2 * m + 1;
  a.i0 = m;
  auto& pb = a.pb;
  for (int i = 0; i < a.n_soc; ++i)
    pb.soc_grid.push_back(0.5 + (i - m) * kH);
  pb.soc0 = 0.5;
  pb.soc_model.xi = {-kH / kDp, 0.0, 0.0, -kH / kDp, 0.0, 0.0, -kH / kDp, 0.0, 0.0};
  pb.soc_model.soc_min = pb.soc_grid.front();
  pb.soc_model.soc_max = pb.soc_grid.back();
  pb.p_aux = kDp;
  pb.ac_on = true;
  pb.friction_blending = blending;

  a.j_lo = -(n_pbat / 2);
  a.j_hi = a.j_lo + n_pbat - 1;
  for (int j = a.j_lo; j <= a.j_hi; ++j)
    pb.p_bat_grid.push_back(j * kDp);
  pb.battery.p_bat_min = (a.j_lo - 1) * kDp;
  pb.battery.p_bat_max = (a.j_hi + 1) * kDp;
  pb.battery.capacity_kwh = 1.0;

  std::uniform_real_distribution<double> corner(0.05, 1.5);
  const double p_max = 10 * kDp;
  LinearTable ool({0.0, p_max}, {100.0, 300.0});
  GridMap2D fuel({100.0, 300.0}, {0.0, p_max}, {corner(rng), corner(rng), corner(rng), corner(rng)});
  pb.engine = powertrain::EngineMaps(p_max, ool, fuel);

  std::uniform_int_distribution<int> demand(-5, 9);
  for (int k = 0; k < K; ++k)
  {
    int u = demand(rng);
    a.demand_units.push_back(u);
    pb.demand.push_back(u * kDp - pb.p_aux);
  }
  std::uniform_real_distribution<double> weight(0.0, 400.0);
  pb.terminal = {0.5, weight(rng), weight(rng) / 10.0};
  return a;
}

struct Move
{
  int dj;       // battery power units, SOC index moves by -dj
  double fuel;  // g
};

// Controls of one step, built directly from the problem data.
inline std::vector<Move> moves(const AlignedProblem& a, int k)
{
  std::vector<Move> out;
  const auto& pb = a.pb;
  int d = a.demand_units[static_cast<std::size_t>(k)];
  double demand = d * kDp;
  if (demand >= pb.battery.p_bat_min && demand <= pb.battery.p_bat_max)
  {
    out.push_back({d, 0.0});
    if (pb.friction_blending && d < 1)
      for (int j = a.j_lo; j <= a.j_hi; ++j)
        if (j > d && j <= 1)
          out.push_back({j, 0.0});
  }
  for (int j = a.j_lo; j <= a.j_hi; ++j)
  {
    double p_eng = demand - j * kDp;
    if (p_eng > 0.0 && p_eng <= pb.engine.p_max())
      out.push_back({j, pb.engine.operate(p_eng).fuel_rate});
  }
  return out;
}

inline double enumerate(const AlignedProblem& a, const std::vector<std::vector<Move>>& steps, int k, int i, double fuel)
{
  if (k == static_cast<int>(steps.size()))
    return fuel + a.pb.terminal(a.pb.soc_grid[static_cast<std::size_t>(i)]);
  double best = kInf;
  for (const auto& mv : steps[static_cast<std::size_t>(k)])
  {
    int next = i - mv.dj;
    if (next < 0 || next >= a.n_soc)
      continue;
    best = std::min(best, enumerate(a, steps, k + 1, next, fuel + mv.fuel));
  }
  return best;
}

inline double brute_force(const AlignedProblem& a)
{
  std::vector<std::vector<Move>> steps;
  for (int k = 0; k < a.pb.horizon(); ++k)
    steps.push_back(moves(a, k));
  return enumerate(a, steps, 0, a.i0, 0.0);
}

}  // namespace ecohev::oracle
