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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ecohev/dp.hpp"
#include "ecohev/errors.hpp"
#include "ecohev/harness.hpp"
#include "ecohev/planner.hpp"
#include "ecohev/thermal.hpp"
#include "ecohev/traffic.hpp"

#include "dp_oracle.hpp"

using namespace ecohev;
using namespace ecohev::harness;
using thermal::Species;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome
{
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok)
      pass = false;
    if (!detail.empty())
      detail += "; ";
    detail += (ok ? "" : "NOT ") + what;
  }
};

std::string num(double x, int digits = 3)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const CombinationMeans& means(const BatchResult& b, PlannerKind p, ControllerKind c)
{
  return b.means[combination_index(p, c)];
}

Outcome dp_oracle()
{
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> horizon(1, 10);
  auto t0 = Clock::now();
  int compared = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 80 && compared < 30; ++trial)
  {
    int K = horizon(rng);
    int n_pbat = std::clamp(static_cast<int>(std::pow(2.0e5, 1.0 / K)) - 2, 2, 9);
    auto a = oracle::make_problem(rng, K, n_pbat, trial % 2 == 0);
    double best = oracle::brute_force(a);
    if (!std::isfinite(best))
      continue;
    auto sol = dp::solve(a.pb);
    double rel = std::abs(sol.value_estimate - best) / std::max(1.0, std::abs(best));
    rel = std::max(rel, std::abs(sol.value - best) / std::max(1.0, std::abs(best)));
    worst = std::max(worst, rel);
    ++compared;
  }
  double elapsed = seconds_since(t0);
  o.require(compared >= 25, std::to_string(compared) + " problems compared");
  o.require(worst <= 1e-6, "worst relative gap " + sci(worst) + " <= 1e-6");
  o.require(elapsed < 10.0, "runtime " + num(elapsed, 2) + " s < 10 s");
  return o;
}

Outcome dominance(const BatchResult& b, double batch_seconds)
{
  Outcome o;
  const double saving = means(b, PlannerKind::Eco, ControllerKind::DP).saving_pct;
  o.require(b.failures == 0, std::to_string(b.failures) + " failed cases");
  o.require(b.dp_dominance_violations == 0,
            std::to_string(b.dp_dominance_violations) + " Eco+DP cases above Eco+RuleBased");
  o.require(saving > 0.0, "Eco+DP saving " + num(saving, 2) + "% > 0");
  o.require(saving >= 5.0 && saving <= 30.0, "saving inside 5-30% band");
  o.require(batch_seconds < 300.0, "batch " + num(batch_seconds, 1) + " s < 300 s");
  return o;
}

Outcome charge_sustain(const BatchResult& b)
{
  Outcome o;
  double worst = 0.0;
  int missing = 0;
  for (const auto& vc : b.cases)
    for (const auto& r : vc.results)
    {
      if (!r)
      {
        ++missing;
        continue;
      }
      worst = std::max(worst, std::abs(r->delta_soc));
    }
  o.require(missing == 0, std::to_string(missing) + " missing cases");
  o.require(worst <= 0.05, "max |dSOC| " + num(worst, 4) + " <= 0.05");
  return o;
}

Outcome thermal_direction(const BatchResult& b)
{
  Outcome o;
  const auto& base = means(b, PlannerKind::Baseline, ControllerKind::RuleBased);
  const auto& eco = means(b, PlannerKind::Eco, ControllerKind::RuleBased);
  const auto& eco_dp = means(b, PlannerKind::Eco, ControllerKind::DP);
  o.require(eco.mean_t_cat < base.mean_t_cat,
            "T_cat Eco+RB " + num(eco.mean_t_cat, 1) + " < Baseline+RB " + num(base.mean_t_cat, 1));
  o.require(eco.mean_t_cl < base.mean_t_cl,
            "T_cl Eco+RB " + num(eco.mean_t_cl, 2) + " < Baseline+RB " + num(base.mean_t_cl, 2));
  o.require(eco_dp.mean_t_cat > eco.mean_t_cat && eco_dp.mean_t_cat < base.mean_t_cat,
            "T_cat Eco+DP " + num(eco_dp.mean_t_cat, 1) + " between Eco+RB and Baseline+RB");
  return o;
}

Outcome light_off_delay(const BatchResult& b)
{
  Outcome o;
  for (auto c : {ControllerKind::RuleBased, ControllerKind::DP})
  {
    double base = means(b, PlannerKind::Baseline, c).light_off_time;
    double eco = means(b, PlannerKind::Eco, c).light_off_time;
    o.require(eco > base, std::string(to_string(c)) + " light-off Eco " + num(eco, 1) + " s > Baseline " +
                              num(base, 1) + " s");
  }
  return o;
}

std::string indices(const CombinationMeans& m)
{
  return "HC " + num(m.improvement_pct.hc, 2) + "%, CO " + num(m.improvement_pct.co, 2) + "%, NOx " +
         num(m.improvement_pct.nox, 2) + "%";
}

Outcome cold_emissions(const BatchResult& b)
{
  Outcome o;
  const auto& m = means(b, PlannerKind::Eco, ControllerKind::DP);
  const auto& imp = m.improvement_pct;
  o.require(imp.co > 0.0 && imp.nox > 0.0, "Eco+DP CO and NOx indices positive");
  o.require(imp.hc < imp.co && imp.hc < imp.nox, "HC index below CO and NOx");
  o.detail += " (" + indices(m) + ")";
  return o;
}

Outcome warm_emissions(const BatchResult& b)
{
  Outcome o;
  const auto& m = means(b, PlannerKind::Eco, ControllerKind::RuleBased);
  const auto& imp = m.improvement_pct;
  o.require(imp.hc > 0.0 && imp.co > 0.0 && imp.nox > 0.0, "Eco+RB indices all positive");
  o.detail += " (" + indices(m) + ")";
  return o;
}

Outcome identities(const BatchResult& with_series)
{
  Outcome o;

  // coolant balance
  thermal::ThermalParams p;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> fuel(0.0, 4.0), frac(0.0, 0.4), speed(0.0, 20.0);
  thermal::ThermalState s{60.0, 50.0};
  const double t_start = s.t_cl;
  double net = 0.0, gross = 0.0;
  for (int k = 0; k < 10000; ++k)
  {
    double f = fuel(rng);
    double p_eng = frac(rng) * f * p.fuel_lhv;
    auto h = thermal::heat_split(f, p_eng, p, s.t_cl, 30.0, speed(rng));
    net += h.q_fuel - p_eng - h.q_exh - h.q_air - h.q_rad;
    gross += h.q_fuel + p_eng + h.q_exh + std::abs(h.q_air) + h.q_rad;
    s.t_cl = thermal::coolant_step(s, h, p_eng, p);
  }
  double gap = std::abs(p.engine_thermal_mass * (s.t_cl - t_start) - net);
  o.require(gap <= 1e4 * std::numeric_limits<double>::epsilon() * gross,
            "coolant balance gap " + sci(gap) + " J");

  // tailpipe never above engine-out
  long rows = 0, violations = 0;
  for (const auto& vc : with_series.cases)
    for (const auto& r : vc.results)
      if (r)
        for (const auto& row : r->series)
        {
          ++rows;
          for (Species sp : thermal::kAllSpecies)
            violations += row.tailpipe[sp] > row.engine_out[sp] || row.tailpipe[sp] < 0.0;
        }
  o.require(rows > 0 && violations == 0,
            "tailpipe <= engine-out on " + std::to_string(rows) + " rows (" + std::to_string(violations) + " bad)");

  // cosine ramp distance
  std::uniform_real_distribution<double> v(0.0, 25.0);
  std::uniform_int_distribution<int> n(1, 120);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i)
  {
    double v0 = v(rng), vf = v(rng);
    int d = n(rng);
    planner::SpeedProfile prof;
    prof.speeds = planner::trig_segment(v0, vf, d);
    prof.modes.assign(prof.speeds.size(), planner::DriveMode::Cruise);
    double expected = d * (v0 + vf) / 2.0;
    worst = std::max(worst, std::abs(prof.distance() - expected) / std::max(1e-12, expected));
  }
  o.require(worst <= 1e-9, "ramp distance relative error " + sci(worst));

  // queue vehicle conservation
  std::uniform_real_distribution<double> rate(0.0, 1500.0);
  std::vector<double> arrivals(3600);
  for (auto& a : arrivals)
    a = rate(rng);
  traffic::QueueModel model;
  model.startup_lost_time = 2.0;
  auto trace = traffic::evolve_queue({90.0, 40.0, 35.0, 5.0}, arrivals, 1800.0, 0.0, 3600, model);
  bool exact = true;
  double in = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i)
  {
    in += arrivals[i - 1] / 3600.0;
    exact = exact && trace[i].cumulative_arrivals == in &&
            trace[i].queue_length == trace[i].cumulative_arrivals - trace[i].cumulative_departures &&
            trace[i].queue_length >= 0.0;
  }
  o.require(exact, "queue conservation exact");
  return o;
}

std::string batch_bytes(const BatchResult& b)
{
  std::ostringstream csv;
  write_cases_csv(csv, b);
  return csv.str() + "\n" + batch_to_json(b).dump(2);
}

Outcome determinism(const Scenario& sc, const BatchResult& reference)
{
  Outcome o;
  const std::string ref = batch_bytes(reference);
  auto again = run_batch(sc, 50, 7, {1, false});
  o.require(batch_bytes(again) == ref, "repeat run byte-identical");
  int threads = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
  auto parallel = run_batch(sc, 50, 7, {threads, false});
  o.require(batch_bytes(parallel) == ref, std::to_string(threads) + "-thread run byte-identical");
  return o;
}

Outcome efficiency_pins(const Scenario& sc)
{
  Outcome o;
  const auto& c = sc.thermal.params.curves;
  for (Species s : {Species::CO, Species::NOx})
  {
    double eta = thermal::conversion_efficiency(200.0, c[s]);
    o.require(eta >= 0.495 && eta <= 0.5, std::string(thermal::to_string(s)) + " eta(200) " + num(eta, 4));
  }
  for (Species s : thermal::kAllSpecies)
  {
    double eta = thermal::conversion_efficiency(300.0, c[s]);
    o.require(eta > 0.98, std::string(thermal::to_string(s)) + " eta(300) " + num(eta, 4) + " > 0.98");
  }
  return o;
}

}  // namespace

int main()
{
  int failed = 0;
  auto report = [&](int id, const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " C" << id << " " << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  };
  auto crashed = [&](int id, const std::string& name, const std::exception& e) {
    std::cout << "FAIL C" << id << " " << name << ": " << e.what() << std::endl;
    ++failed;
  };

  try
  {
    report(1, "dp-vs-brute-force", dp_oracle());
  }
  catch (const std::exception& e)
  {
    crashed(1, "dp-vs-brute-force", e);
  }

  Scenario sc;
  try
  {
    sc = load_scenario(ECOHEV_SOURCE_DIR "/data/scenario_default.json");
  }
  catch (const std::exception& e)
  {
    std::cout << "FAIL scenario: " << e.what() << std::endl;
    return 1;
  }
  const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try
  {
    Scenario cold = sc;
    cold.initial.t_cat0 = 50.0;
    auto t0 = Clock::now();
    auto batch = run_batch(cold, 50, 7, {threads, true});
    double elapsed = seconds_since(t0);
    report(2, "dp-dominance", dominance(batch, elapsed));
    report(3, "charge-sustain", charge_sustain(batch));
    report(4, "thermal-direction", thermal_direction(batch));
    report(5, "light-off-delay", light_off_delay(batch));
    report(6, "emissions-cold-catalyst", cold_emissions(batch));

    Scenario warm = sc;
    warm.initial.t_cat0 = 300.0;
    auto warm_batch = run_batch(warm, 50, 7, {threads, false});
    report(7, "emissions-warm-catalyst", warm_emissions(warm_batch));

    report(8, "conservation-identities", identities(batch));

    for (auto& vc : batch.cases)
      for (auto& r : vc.results)
        if (r)
          r->series.clear();
    report(9, "determinism", determinism(cold, batch));
  }
  catch (const std::exception& e)
  {
    crashed(0, "batch", e);
  }

  report(10, "efficiency-pins", efficiency_pins(sc));

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
