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
#include "ecohev/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "ecohev/dp.hpp"

namespace ecohev::harness
{

namespace
{

using planner::DriveMode;
using planner::SpeedProfile;
using powertrain::EngineMode;

constexpr double kLightOff = 200.0;
constexpr double kMaxTemp = 1100.0;

std::string snapshot(double t, double v, double soc, double t_cl, double t_cat)
{
  std::ostringstream ss;
  ss << "t=" << t << " s, v=" << v << " m/s, SOC=" << soc << ", T_cl=" << t_cl << " C, T_cat=" << t_cat << " C";
  return ss.str();
}

// Eco approach to one signal: the first green window the vehicle can use,
// stopping at the bar when no cruise speed fits it.
SpeedProfile eco_approach(const Scenario& sc, const traffic::Intersection& x, const planner::PlannerContext& base)
{
  const auto model = sc.corridor.queue_model(x);
  double earliest = base.current_time + (x.position - base.current_position) / x.speed_limit;
  for (int attempt = 0; attempt < 8; ++attempt)
  {
    planner::PlannerContext ctx = base;
    ctx.green_window = traffic::next_green_window(x, model, earliest);
    auto choice = planner::choose_arrival(ctx, sc.eco);
    if (choice.mode != DriveMode::Stop)
      return planner::plan_eco_profile(ctx, sc.eco);
    auto stop = planner::plan_stop_profile(ctx, ctx.green_window.earliest_pass, sc.eco);
    auto depart = planner::crossing_time(stop, x.position - base.current_position);
    if (depart && *depart <= ctx.green_window.latest_pass)
      return stop;
    earliest = ctx.green_window.latest_pass + 1.0;
  }
  throw NoWindowInHorizon("no usable green window at " + x.name);
}

void check_state(double soc, double t_cl, double t_cat, const Scenario& sc)
{
  const auto& m = sc.powertrain.soc_model;
  const double lo = sc.thermal.t_amb - 1.0;
  if (!(soc >= m.soc_min - 1e-12 && soc <= m.soc_max + 1e-12))
    throw Error("SOC left its bounds");
  if (!(t_cl >= lo && t_cl <= kMaxTemp))
    throw Error("coolant temperature outside sanity bounds");
  if (!(t_cat >= lo && t_cat <= kMaxTemp))
    throw Error("catalyst temperature outside sanity bounds");
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json rates_to_json(const thermal::EmissionRates& r)
{
  return {{"hc", r.hc}, {"co", r.co}, {"nox", r.nox}};
}

thermal::EmissionRates rates_from_json(const json& j)
{
  return {j.at("hc").get<double>(), j.at("co").get<double>(), j.at("nox").get<double>()};
}

}  // namespace

CaseFailure::CaseFailure(long step, const std::string& snap, const std::string& cause)
  : Error("case failed at step " + std::to_string(step) + " (" + snap + "): " + cause), step_(step)
{
}

double equivalent_energy(double fuel_g, double delta_soc, double fuel_lhv, double capacity_kwh)
{
  return fuel_g * fuel_lhv / 3.6e6 - delta_soc * capacity_kwh;
}

std::optional<double> emission_improvement(double z_base, double z_test)
{
  if (z_base == 0.0)
    return std::nullopt;
  if (z_base < 0.0 || z_test < 0.0)
    throw std::invalid_argument("emission totals must be non-negative");
  return (z_base - z_test) / z_base * 100.0;
}

SpeedProfile plan_trip(const Scenario& sc)
{
  const auto& cor = sc.corridor;
  SpeedProfile trip;
  trip.t0 = sc.initial.entry_time;
  trip.speeds = {sc.initial.v0};
  trip.modes = {DriveMode::Cruise};
  double x = 0.0;

  for (const auto& in : cor.intersections)
  {
    const double v = trip.speeds.back();
    if (!(in.position > x))
      throw std::domain_error("vehicle overran the stop bar at " + in.name);
    planner::PlannerContext ctx;
    ctx.current_time = trip.end_time();
    ctx.current_position = x;
    ctx.current_speed = v;
    ctx.stopbar_position = in.position;
    ctx.speed_limit = in.speed_limit;
    ctx.a_max = sc.a_max;
    ctx.a_min = sc.a_min;
    SpeedProfile seg;
    if (sc.planner == PlannerKind::Baseline)
      seg = planner::plan_baseline_profile(ctx, in.signal);
    else
      seg = eco_approach(sc, in, ctx);
    x += seg.distance();
    trip.append(seg);
  }

  const double rest = cor.length - x;
  if (rest < -1e-9)
    throw std::domain_error("vehicle overran the corridor end");
  const double ramp = sc.planner == PlannerKind::Eco ? sc.eco.ramp_accel_fraction : 1.0;
  if (rest > 1e-9 || trip.speeds.back() > 0.0)
  {
    SpeedProfile last;
    try
    {
      last = planner::plan_cruise_to(trip.end_time(), trip.speeds.back(), std::max(0.0, rest), cor.speed_limit,
                                     sc.a_max, sc.a_min, ramp, true);
    }
    catch (const std::domain_error&)
    {
      // too short for the gentle eco ramps: stop within the full comfort bounds
      last = planner::plan_cruise_to(trip.end_time(), trip.speeds.back(), std::max(0.0, rest), cor.speed_limit,
                                     sc.a_max, sc.a_min, 1.0, true);
    }
    trip.append(last);
  }
  return trip;
}

CaseResult run_case(const Scenario& sc)
{
  const auto& pt = sc.powertrain;
  const auto& th = sc.thermal;
  const double t_amb = th.t_amb;

  CaseResult r;
  r.controller = sc.controller;
  r.planner = sc.planner;
  r.v0 = sc.initial.v0;
  r.entry_time = sc.initial.entry_time;
  r.soc0 = sc.initial.soc0;

  SpeedProfile profile;
  std::vector<double> demand;
  try
  {
    profile = plan_trip(sc);
    demand = powertrain::traction_power(profile, pt.vehicle);
  }
  catch (const std::exception& e)
  {
    throw CaseFailure(-1, snapshot(sc.initial.entry_time, sc.initial.v0, sc.initial.soc0, sc.initial.t_cl0,
                                   sc.initial.t_cat0),
                      std::string("planning: ") + e.what());
  }
#ifndef NDEBUG
  if (auto err = profile.check(sc.corridor.speed_limit, sc.a_max, sc.a_min, 1e-6))
    throw CaseFailure(-1, "profile", *err);
#endif

  const std::size_t K = demand.size();
  std::vector<powertrain::ControlDecision> controls;
  std::vector<powertrain::EngineOp> ops;
  if (sc.controller == ControllerKind::DP && K > 0)
  {
    dp::DpProblem pb;
    pb.demand = demand;
    pb.p_aux = pt.p_aux;
    pb.ac_on = pt.ac_on;
    pb.soc0 = sc.initial.soc0;
    pb.friction_blending = true;
    pb.soc_grid = sc.dp.soc_grid();
    pb.p_bat_grid = sc.dp.p_bat_grid(pt.battery);
    pb.terminal.soc_target = sc.initial.soc0;
    pb.terminal.weight = sc.dp.terminal_weight;
    pb.terminal.linear_weight =
        sc.dp.terminal_linear_weight.value_or(pt.battery.capacity_kwh * 3.6e6 / th.params.fuel_lhv);
    pb.soc_model = pt.soc_model;
    pb.engine = pt.engine;
    pb.battery = pt.battery;
    try
    {
      auto sol = dp::solve(pb);
      controls = std::move(sol.controls);
      ops = std::move(sol.engine);
    }
    catch (const std::exception& e)
    {
      throw CaseFailure(0, snapshot(profile.t0, profile.speeds.front(), sc.initial.soc0, sc.initial.t_cl0,
                                    sc.initial.t_cat0),
                        std::string("power split optimisation: ") + e.what());
    }
  }

  powertrain::PowertrainState ps{sc.initial.soc0};
  thermal::ThermalState ts{sc.initial.t_cl0, sc.initial.t_cat0};
  double sum_t_cl = ts.t_cl;
  double sum_t_cat = ts.t_cat;
  if (ts.t_cat >= kLightOff)
  {
    r.light_off_reached = true;
    r.light_off_time = 0.0;
  }
  EngineMode prev_mode = EngineMode::Off;
  r.series.reserve(K);

  for (std::size_t k = 0; k < K; ++k)
  {
    const double t = profile.t0 + static_cast<double>(k) * profile.dt;
    const double v = profile.speeds[k];
    try
    {
      const double vm = 0.5 * (profile.speeds[k] + profile.speeds[k + 1]);
      powertrain::ControlDecision u;
      powertrain::EngineOp op;
      if (sc.controller == ControllerKind::DP)
      {
        u = controls[k];
        op = ops[k];
      }
      else
      {
        auto split = powertrain::rule_based_split(demand[k], pt.p_aux, vm, ps, pt.rules, pt.engine, pt.battery, prev_mode);
        u = split.decision;
        op = split.engine;
      }

      auto step = powertrain::soc_step(ps, u.p_bat - pt.p_aux, pt.p_aux, pt.ac_on, pt.soc_model);
      if (step.saturated)
        ++r.soc_saturations;

      auto heat = thermal::heat_split(op.fuel_rate, op.p_eng, th.params, ts.t_cl, t_amb, vm);
      double t_cl_next = thermal::coolant_step(ts, heat, op.p_eng, th.params);
      auto eo = th.emissions.engine_out(op.omega, op.p_eng);
      auto tp = thermal::tailpipe_step(eo, ts.t_cat, th.params.curves);
      double t_cat_next = thermal::catalyst_step(ts, heat.exhaust_flow, heat.exhaust_temp, eo, t_amb, th.params);

#ifndef NDEBUG
      for (auto s : thermal::kAllSpecies)
        if (tp[s] > eo[s] || tp[s] < 0.0)
          throw Error("tailpipe flow exceeds engine-out flow");
      if (u.e_mode == EngineMode::On && !(op.p_eng > 0.0 && op.p_eng <= pt.engine.p_max()))
        throw Error("engine power outside (0, p_max]");
      if (u.p_bat < pt.battery.p_bat_min - 1e-9 || u.p_bat > pt.battery.p_bat_max + 1e-9)
        throw Error("battery power outside its envelope");
      if (u.e_mode == EngineMode::Off && op.fuel_rate != 0.0)
        throw Error("fuel burnt with the engine off");
#endif

      r.series.push_back({t, v, profile.modes[k], demand[k], u.e_mode, u.p_bat, op.p_eng, ps.soc, ts.t_cl, ts.t_cat,
                          eo, tp});
      r.fuel_g += op.fuel_rate * profile.dt;
      r.engine_out_g += eo * profile.dt;
      r.tailpipe_g += tp * profile.dt;
      if (u.e_mode == EngineMode::On && prev_mode == EngineMode::Off)
        ++r.engine_starts;
      prev_mode = u.e_mode;

      ps = step.state;
      ts = {t_cl_next, t_cat_next};
      check_state(ps.soc, ts.t_cl, ts.t_cat, sc);
    }
    catch (const CaseFailure&)
    {
      throw;
    }
    catch (const std::exception& e)
    {
      throw CaseFailure(static_cast<long>(k), snapshot(t, v, ps.soc, ts.t_cl, ts.t_cat), e.what());
    }
    sum_t_cl += ts.t_cl;
    sum_t_cat += ts.t_cat;
    if (!r.light_off_reached && ts.t_cat >= kLightOff)
    {
      r.light_off_reached = true;
      r.light_off_time = static_cast<double>(k + 1) * profile.dt;
    }
    if (profile.speeds[k] > 0.0 && profile.speeds[k + 1] == 0.0)
      ++r.stops;
  }

  r.duration = static_cast<double>(K) * profile.dt;
  r.distance = profile.distance();
  r.soc_final = ps.soc;
  r.delta_soc = ps.soc - sc.initial.soc0;
  r.equivalent_energy_kwh = equivalent_energy(r.fuel_g, r.delta_soc, th.params.fuel_lhv, pt.battery.capacity_kwh);
  r.mean_t_cl = sum_t_cl / static_cast<double>(K + 1);
  r.mean_t_cat = sum_t_cat / static_cast<double>(K + 1);
  r.final_t_cl = ts.t_cl;
  r.final_t_cat = ts.t_cat;
  if (!r.light_off_reached)
    r.light_off_time = r.duration;
  return r;
}

std::size_t combination_index(PlannerKind planner, ControllerKind controller)
{
  for (std::size_t i = 0; i < kCombinations.size(); ++i)
    if (kCombinations[i].planner == planner && kCombinations[i].controller == controller)
      return i;
  throw std::logic_error("unknown combination");
}

std::string combination_name(const Combination& c)
{
  return std::string(to_string(c.planner)) + "+" + std::string(to_string(c.controller));
}

BatchResult run_batch(const Scenario& sc, int n, std::uint64_t seed, const BatchOptions& opts)
{
  if (n < 0)
    throw std::invalid_argument("batch size must be non-negative");
  BatchResult b;
  b.n = n;
  b.seed = seed;
  b.t_cat0 = sc.initial.t_cat0;
  b.digests = sc.digests;

  // Draw every initial speed up front so the cases do not depend on scheduling.
  std::mt19937_64 rng(seed);
  const double lo = sc.batch.v0_min_kmh / 3.6;
  const double hi = sc.batch.v0_max_kmh / 3.6;
  b.cases.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    auto& c = b.cases[static_cast<std::size_t>(i)];
    c.index = i;
    c.v0 = lo + u * (hi - lo);
    c.entry_time = sc.initial.entry_time + i * sc.batch.entry_interval;
  }

  const std::size_t tasks = b.cases.size() * kCombinations.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++)
    {
      auto& vc = b.cases[task / kCombinations.size()];
      const std::size_t ci = task % kCombinations.size();
      Scenario s = sc;
      s.planner = kCombinations[ci].planner;
      s.controller = kCombinations[ci].controller;
      s.initial.v0 = vc.v0;
      s.initial.entry_time = vc.entry_time;
      try
      {
        auto res = run_case(s);
        if (!opts.keep_series)
          res.series.clear();
        vc.results[ci] = std::move(res);
      }
      catch (const std::exception& e)
      {
        vc.errors[ci] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  if (threads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  aggregate(b);
  return b;
}

void aggregate(BatchResult& b)
{
  b.failures = 0;
  b.dp_dominance_violations = 0;
  b.means = {};
  const std::size_t base = 0;
  const std::size_t eco_rule = combination_index(PlannerKind::Eco, ControllerKind::RuleBased);
  const std::size_t eco_dp = combination_index(PlannerKind::Eco, ControllerKind::DP);

  std::array<int, 4> saving_count{};
  std::array<std::array<int, 3>, 4> imp_count{};
  for (const auto& vc : b.cases)
  {
    for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
    {
      if (!vc.results[ci])
      {
        ++b.failures;
        continue;
      }
      const auto& r = *vc.results[ci];
      auto& m = b.means[ci];
      ++m.completed;
      m.energy_kwh += r.equivalent_energy_kwh;
      m.fuel_g += r.fuel_g;
      m.delta_soc += r.delta_soc;
      m.mean_t_cl += r.mean_t_cl;
      m.mean_t_cat += r.mean_t_cat;
      m.light_off_time += r.light_off_time;
      if (!r.light_off_reached)
        ++m.light_off_censored;
      m.engine_out_g += r.engine_out_g;
      m.tailpipe_g += r.tailpipe_g;

      if (const auto& ref = vc.results[base])
      {
        if (ref->equivalent_energy_kwh != 0.0)
        {
          m.saving_pct += (ref->equivalent_energy_kwh - r.equivalent_energy_kwh) / ref->equivalent_energy_kwh * 100.0;
          ++saving_count[ci];
        }
        for (auto s : thermal::kAllSpecies)
        {
          auto si = static_cast<std::size_t>(s);
          if (auto imp = emission_improvement(ref->tailpipe_g[s], r.tailpipe_g[s]))
          {
            m.improvement_pct[s] += *imp;
            ++imp_count[ci][si];
          }
          else
          {
            ++m.improvement_excluded[si];
          }
        }
      }
    }
    if (vc.results[eco_rule] && vc.results[eco_dp] &&
        vc.results[eco_dp]->equivalent_energy_kwh > vc.results[eco_rule]->equivalent_energy_kwh)
      ++b.dp_dominance_violations;
  }

  for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
  {
    auto& m = b.means[ci];
    if (m.completed > 0)
    {
      const double k = 1.0 / m.completed;
      m.energy_kwh *= k;
      m.fuel_g *= k;
      m.delta_soc *= k;
      m.mean_t_cl *= k;
      m.mean_t_cat *= k;
      m.light_off_time *= k;
      m.engine_out_g = m.engine_out_g * k;
      m.tailpipe_g = m.tailpipe_g * k;
    }
    if (saving_count[ci] > 0)
      m.saving_pct /= saving_count[ci];
    for (auto s : thermal::kAllSpecies)
    {
      int c = imp_count[ci][static_cast<std::size_t>(s)];
      if (c > 0)
        m.improvement_pct[s] /= c;
    }
  }
}

json case_to_json(const CaseResult& c)
{
  return {{"controller", to_string(c.controller)},
          {"planner", to_string(c.planner)},
          {"v0", c.v0},
          {"entry_time", c.entry_time},
          {"duration", c.duration},
          {"distance", c.distance},
          {"fuel_g", c.fuel_g},
          {"soc0", c.soc0},
          {"soc_final", c.soc_final},
          {"delta_soc", c.delta_soc},
          {"equivalent_energy_kwh", c.equivalent_energy_kwh},
          {"engine_out_g", rates_to_json(c.engine_out_g)},
          {"tailpipe_g", rates_to_json(c.tailpipe_g)},
          {"mean_t_cl", c.mean_t_cl},
          {"mean_t_cat", c.mean_t_cat},
          {"final_t_cl", c.final_t_cl},
          {"final_t_cat", c.final_t_cat},
          {"light_off_time", c.light_off_time},
          {"light_off_reached", c.light_off_reached},
          {"stops", c.stops},
          {"engine_starts", c.engine_starts},
          {"soc_saturations", c.soc_saturations}};
}

CaseResult case_from_json(const json& j)
{
  try
  {
    CaseResult c;
    c.controller = parse_controller(j.at("controller").get<std::string>());
    c.planner = parse_planner(j.at("planner").get<std::string>());
    c.v0 = j.at("v0").get<double>();
    c.entry_time = j.at("entry_time").get<double>();
    c.duration = j.at("duration").get<double>();
    c.distance = j.at("distance").get<double>();
    c.fuel_g = j.at("fuel_g").get<double>();
    c.soc0 = j.at("soc0").get<double>();
    c.soc_final = j.at("soc_final").get<double>();
    c.delta_soc = j.at("delta_soc").get<double>();
    c.equivalent_energy_kwh = j.at("equivalent_energy_kwh").get<double>();
    c.engine_out_g = rates_from_json(j.at("engine_out_g"));
    c.tailpipe_g = rates_from_json(j.at("tailpipe_g"));
    c.mean_t_cl = j.at("mean_t_cl").get<double>();
    c.mean_t_cat = j.at("mean_t_cat").get<double>();
    c.final_t_cl = j.at("final_t_cl").get<double>();
    c.final_t_cat = j.at("final_t_cat").get<double>();
    c.light_off_time = j.at("light_off_time").get<double>();
    c.light_off_reached = j.at("light_off_reached").get<bool>();
    c.stops = j.at("stops").get<int>();
    c.engine_starts = j.at("engine_starts").get<int>();
    c.soc_saturations = j.at("soc_saturations").get<int>();
    return c;
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("malformed case result: ") + e.what());
  }
}

json batch_to_json(const BatchResult& b)
{
  json j;
  j["schema"] = "ecohev.batch_result";
  j["schema_version"] = 1;
  j["n"] = b.n;
  j["seed"] = b.seed;
  j["t_cat0"] = b.t_cat0;
  j["failures"] = b.failures;
  j["dp_dominance_violations"] = b.dp_dominance_violations;
  j["config_digests"] = b.digests;
  json means = json::object();
  for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
  {
    const auto& m = b.means[ci];
    means[combination_name(kCombinations[ci])] = {
        {"completed", m.completed},
        {"energy_kwh", m.energy_kwh},
        {"fuel_g", m.fuel_g},
        {"delta_soc", m.delta_soc},
        {"mean_t_cl", m.mean_t_cl},
        {"mean_t_cat", m.mean_t_cat},
        {"light_off_time", m.light_off_time},
        {"light_off_censored", m.light_off_censored},
        {"saving_pct", m.saving_pct},
        {"engine_out_g", rates_to_json(m.engine_out_g)},
        {"tailpipe_g", rates_to_json(m.tailpipe_g)},
        {"improvement_pct", rates_to_json(m.improvement_pct)},
        {"improvement_excluded", m.improvement_excluded}};
  }
  j["means"] = means;
  json cases = json::array();
  for (const auto& vc : b.cases)
  {
    json c = {{"index", vc.index}, {"v0", vc.v0}, {"entry_time", vc.entry_time}};
    json results = json::object();
    for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
    {
      const std::string name = combination_name(kCombinations[ci]);
      if (vc.results[ci])
        results[name] = case_to_json(*vc.results[ci]);
      else
        results[name] = {{"error", vc.errors[ci]}};
    }
    c["results"] = results;
    cases.push_back(c);
  }
  j["cases"] = cases;
  return j;
}

BatchResult batch_from_json(const json& j)
{
  try
  {
    if (j.at("schema").get<std::string>() != "ecohev.batch_result")
      throw ConfigError("not a batch result file");
    BatchResult b;
    b.n = j.at("n").get<int>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.t_cat0 = j.at("t_cat0").get<double>();
    b.failures = j.at("failures").get<int>();
    b.dp_dominance_violations = j.at("dp_dominance_violations").get<int>();
    b.digests = j.at("config_digests").get<std::map<std::string, std::string>>();
    const json& means = j.at("means");
    for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
    {
      const json& m = means.at(combination_name(kCombinations[ci]));
      auto& out = b.means[ci];
      out.completed = m.at("completed").get<int>();
      out.energy_kwh = m.at("energy_kwh").get<double>();
      out.fuel_g = m.at("fuel_g").get<double>();
      out.delta_soc = m.at("delta_soc").get<double>();
      out.mean_t_cl = m.at("mean_t_cl").get<double>();
      out.mean_t_cat = m.at("mean_t_cat").get<double>();
      out.light_off_time = m.at("light_off_time").get<double>();
      out.light_off_censored = m.at("light_off_censored").get<int>();
      out.saving_pct = m.at("saving_pct").get<double>();
      out.engine_out_g = rates_from_json(m.at("engine_out_g"));
      out.tailpipe_g = rates_from_json(m.at("tailpipe_g"));
      out.improvement_pct = rates_from_json(m.at("improvement_pct"));
      out.improvement_excluded = m.at("improvement_excluded").get<std::array<int, 3>>();
    }
    for (const json& c : j.at("cases"))
    {
      VehicleCase vc;
      vc.index = c.at("index").get<int>();
      vc.v0 = c.at("v0").get<double>();
      vc.entry_time = c.at("entry_time").get<double>();
      const json& results = c.at("results");
      for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
      {
        const json& r = results.at(combination_name(kCombinations[ci]));
        if (r.contains("error"))
          vc.errors[ci] = r.at("error").get<std::string>();
        else
          vc.results[ci] = case_from_json(r);
      }
      b.cases.push_back(std::move(vc));
    }
    return b;
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("malformed batch result: ") + e.what());
  }
}

void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows)
{
  for (std::size_t i = 0; i < kSeriesColumns.size(); ++i)
    os << (i ? "," : "") << kSeriesColumns[i];
  os << '\n';
  for (const auto& r : rows)
  {
    os << fmt(r.t) << ',' << fmt(r.v) << ',' << planner::to_string(r.mode) << ',' << fmt(r.p_trac) << ','
       << static_cast<int>(r.e_mode) << ',' << fmt(r.p_bat) << ',' << fmt(r.p_eng) << ',' << fmt(r.soc) << ','
       << fmt(r.t_cl) << ',' << fmt(r.t_cat);
    for (const auto* rates : {&r.engine_out, &r.tailpipe})
      for (auto s : thermal::kAllSpecies)
        os << ',' << fmt((*rates)[s]);
    os << '\n';
  }
}

std::vector<SeriesRow> read_series_csv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
    throw ConfigError("empty time-series CSV");
  std::vector<SeriesRow> rows;
  while (std::getline(is, line))
  {
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      f.push_back(cell);
    if (f.size() != kSeriesColumns.size())
      throw ConfigError("time-series row has " + std::to_string(f.size()) + " fields");
    SeriesRow r;
    r.t = std::stod(f[0]);
    r.v = std::stod(f[1]);
    const std::string& m = f[2];
    r.mode = m == "SlowDown" ? DriveMode::SlowDown
             : m == "SpeedUp" ? DriveMode::SpeedUp
             : m == "Stop"    ? DriveMode::Stop
                              : DriveMode::Cruise;
    r.p_trac = std::stod(f[3]);
    r.e_mode = std::stoi(f[4]) == 2 ? EngineMode::On : EngineMode::Off;
    r.p_bat = std::stod(f[5]);
    r.p_eng = std::stod(f[6]);
    r.soc = std::stod(f[7]);
    r.t_cl = std::stod(f[8]);
    r.t_cat = std::stod(f[9]);
    r.engine_out = {std::stod(f[10]), std::stod(f[11]), std::stod(f[12])};
    r.tailpipe = {std::stod(f[13]), std::stod(f[14]), std::stod(f[15])};
    rows.push_back(r);
  }
  return rows;
}

void write_cases_csv(std::ostream& os, const BatchResult& b)
{
  os << "index,combination,v0,entry_time,status,duration,distance,fuel_g,delta_soc,energy_kwh,mean_t_cl,mean_t_cat,"
        "light_off_time,light_off_reached,hc_tp_g,co_tp_g,nox_tp_g,hc_eo_g,co_eo_g,nox_eo_g,stops,engine_starts\n";
  for (const auto& vc : b.cases)
  {
    for (std::size_t ci = 0; ci < kCombinations.size(); ++ci)
    {
      os << vc.index << ',' << combination_name(kCombinations[ci]) << ',' << fmt(vc.v0) << ',' << fmt(vc.entry_time);
      if (!vc.results[ci])
      {
        os << ",failed" << std::string(17, ',') << '\n';
        continue;
      }
      const auto& r = *vc.results[ci];
      os << ",ok," << fmt(r.duration) << ',' << fmt(r.distance) << ',' << fmt(r.fuel_g) << ',' << fmt(r.delta_soc)
         << ',' << fmt(r.equivalent_energy_kwh) << ',' << fmt(r.mean_t_cl) << ',' << fmt(r.mean_t_cat) << ','
         << fmt(r.light_off_time) << ',' << (r.light_off_reached ? 1 : 0);
      for (const auto* g : {&r.tailpipe_g, &r.engine_out_g})
        for (auto s : thermal::kAllSpecies)
          os << ',' << fmt((*g)[s]);
      os << ',' << r.stops << ',' << r.engine_starts << '\n';
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out)
    throw Error("failed writing " + path.string());
}

}  // namespace ecohev::harness
