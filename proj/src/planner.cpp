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
#include "ecohev/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ecohev::planner
{

namespace
{

constexpr double kSpeedEps = 1e-9;

DriveMode tag_for_change(double v, double v_next)
{
  if (v_next > v + kSpeedEps)
    return DriveMode::SpeedUp;
  if (v_next < v - kSpeedEps)
    return DriveMode::SlowDown;
  if (v == 0.0 && v_next == 0.0)
    return DriveMode::Stop;
  return DriveMode::Cruise;
}

void push(SpeedProfile& p, double v, DriveMode mode)
{
  p.speeds.push_back(v);
  p.modes.push_back(mode);
}

// Appends samples 1..n of a cosine ramp (sample 0 is already in the profile).
void push_ramp(SpeedProfile& p, double v0, double vf, int n, DriveMode mode)
{
  if (n <= 0)
    return;
  auto seg = trig_segment(v0, vf, n);
  for (std::size_t k = 1; k < seg.size(); ++k)
    push(p, seg[k], mode);
}

void push_hold(SpeedProfile& p, double v, int n, DriveMode mode)
{
  for (int k = 0; k < n; ++k)
    push(p, v, mode);
}

SpeedProfile start_at(double t0, double v0, DriveMode mode)
{
  SpeedProfile p;
  p.t0 = t0;
  push(p, v0, mode);
  return p;
}

}  // namespace

std::string_view to_string(DriveMode mode)
{
  switch (mode)
  {
    case DriveMode::SlowDown:
      return "SlowDown";
    case DriveMode::SpeedUp:
      return "SpeedUp";
    case DriveMode::Cruise:
      return "Cruise";
    case DriveMode::Stop:
      return "Stop";
  }
  return "?";
}

double SpeedProfile::end_time() const
{
  return speeds.empty() ? t0 : t0 + dt * static_cast<double>(speeds.size() - 1);
}

double SpeedProfile::distance() const
{
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < speeds.size(); ++k)
    s += 0.5 * (speeds[k] + speeds[k + 1]) * dt;
  return s;
}

std::vector<double> SpeedProfile::positions() const
{
  std::vector<double> x(speeds.size(), 0.0);
  for (std::size_t k = 0; k + 1 < speeds.size(); ++k)
    x[k + 1] = x[k] + 0.5 * (speeds[k] + speeds[k + 1]) * dt;
  return x;
}

void SpeedProfile::append(const SpeedProfile& next)
{
  if (next.empty())
    return;
  if (empty())
  {
    *this = next;
    return;
  }
  if (std::abs(next.t0 - end_time()) > 1e-9 || next.speeds.front() != speeds.back())
    throw std::invalid_argument("appended profile does not continue the current one");
  modes.back() = next.modes.front();
  speeds.insert(speeds.end(), next.speeds.begin() + 1, next.speeds.end());
  modes.insert(modes.end(), next.modes.begin() + 1, next.modes.end());
}

std::optional<std::string> SpeedProfile::check(double speed_limit, double a_max, double a_min, double tol) const
{
  if (speeds.size() != modes.size())
    return "speed and mode sequences differ in length";
  for (std::size_t k = 0; k < speeds.size(); ++k)
  {
    if (speeds[k] < -tol)
      return "negative speed at sample " + std::to_string(k);
    if (speeds[k] > speed_limit + tol)
      return "speed above limit at sample " + std::to_string(k);
    if (k + 1 < speeds.size())
    {
      double a = (speeds[k + 1] - speeds[k]) / dt;
      if (a > a_max + tol || a < a_min - tol)
        return "acceleration bound violated at sample " + std::to_string(k);
    }
  }
  return std::nullopt;
}

void PlannerContext::validate() const
{
  if (!(speed_limit > 0.0))
    throw std::invalid_argument("speed limit must be positive");
  if (!(current_speed >= 0.0 && current_speed <= speed_limit + kSpeedEps))
    throw std::invalid_argument("current speed must lie in [0, speed_limit]");
  if (!(stopbar_position > current_position))
    throw std::invalid_argument("stop bar must lie ahead of the vehicle");
  if (!(a_min < 0.0 && a_max > 0.0))
    throw std::invalid_argument("comfort bounds must satisfy a_min < 0 < a_max");
  if (!(green_window.earliest_pass < green_window.latest_pass))
    throw std::invalid_argument("green window must be non-empty");
}

std::vector<double> trig_segment(double v0, double vf, int duration)
{
  if (duration < 1)
    throw std::invalid_argument("trig_segment duration must be at least 1 s");
  if (v0 < 0.0 || vf < 0.0)
    throw std::invalid_argument("trig_segment speeds must be non-negative");
  std::vector<double> v(static_cast<std::size_t>(duration) + 1);
  const double n = duration;
  for (int k = 0; k <= duration; ++k)
    v[static_cast<std::size_t>(k)] = v0 + (vf - v0) * 0.5 * (1.0 - std::cos(std::numbers::pi * k / n));
  v.front() = v0;
  v.back() = vf;
  return v;
}

int ramp_steps(double dv, double accel)
{
  dv = std::abs(dv);
  if (dv <= kSpeedEps)
    return 0;
  // peak slope of the half-cosine is pi*dv/(2n)
  return std::max(1, static_cast<int>(std::ceil(std::numbers::pi * dv / (2.0 * accel) - 1e-12)));
}

std::optional<ApproachFit> fit_approach(double v0, double distance, int steps, bool stop_at_end, double accel,
                                        double decel)
{
  if (steps < 1 || distance < 0.0)
    return std::nullopt;
  double vc = distance / steps;
  int n_in = 0;
  int n_out = 0;
  for (int iter = 0; iter < 64; ++iter)
  {
    int in = ramp_steps(vc - v0, vc > v0 ? accel : decel);
    int out = stop_at_end ? ramp_steps(vc, decel) : 0;
    // ramps at least as long as required keep the slope bound
    if (in <= n_in && out <= n_out)
      return ApproachFit{n_in, steps - n_in - n_out, n_out, vc};
    n_in = std::max(in, n_in);
    n_out = std::max(out, n_out);
    int cruise = steps - n_in - n_out;
    if (cruise < 0)
      return std::nullopt;
    double denom = 0.5 * n_in + cruise + 0.5 * n_out;
    if (denom <= 0.0)
      return std::nullopt;
    vc = (distance - 0.5 * n_in * v0) / denom;
    if (vc < 0.0)
      return std::nullopt;
  }
  return std::nullopt;
}

namespace
{

SpeedProfile build_approach(double t0, double v0, const ApproachFit& fit, DriveMode mode)
{
  SpeedProfile p = start_at(t0, v0, mode);
  push_ramp(p, v0, fit.cruise_speed, fit.ramp_in, mode);
  push_hold(p, fit.cruise_speed, fit.cruise, mode);
  push_ramp(p, fit.cruise_speed, 0.0, fit.ramp_out, mode);
  return p;
}

double ramp_accel(const PlannerContext& ctx, const PlannerOptions& opts)
{
  return opts.ramp_accel_fraction * ctx.a_max;
}

double ramp_decel(const PlannerContext& ctx, const PlannerOptions& opts)
{
  return opts.ramp_accel_fraction * -ctx.a_min;
}

}  // namespace

ModeChoice choose_arrival(const PlannerContext& ctx, const PlannerOptions& opts)
{
  ctx.validate();
  const double d = ctx.stopbar_position - ctx.current_position;
  const double v0 = ctx.current_speed;
  const double vmax = ctx.speed_limit;
  const double vfloor = opts.cruise_floor_fraction * ctx.speed_limit;
  const double acc = ramp_accel(ctx, opts);
  const double dec = ramp_decel(ctx, opts);

  const double rel_lo = ctx.green_window.earliest_pass - ctx.current_time;
  const double rel_hi = ctx.green_window.latest_pass - ctx.current_time;
  int lo = std::max(1, static_cast<int>(std::ceil(rel_lo - 1e-9)));
  int hi = static_cast<int>(std::floor(rel_hi + 1e-9));

  struct Option
  {
    int steps;
    ApproachFit fit;
  };
  std::vector<Option> feasible;
  for (int t = lo; t <= hi; ++t)
  {
    auto fit = fit_approach(v0, d, t, false, acc, dec);
    if (!fit)
      continue;
    if (fit->cruise_speed < vfloor - kSpeedEps || fit->cruise_speed > vmax + kSpeedEps)
      continue;
    feasible.push_back({t, *fit});
  }
  if (feasible.empty())
    return {DriveMode::Stop, 0, {}};

  const double own_arrival = v0 > 0.0 ? d / v0 : std::numeric_limits<double>::infinity();
  const bool cruise_ok = v0 >= vfloor - kSpeedEps && own_arrival >= rel_lo && own_arrival <= rel_hi;
  if (cruise_ok)
  {
    // nearest feasible integer arrival; ties go to the later (slower) one
    const Option* best = &feasible.front();
    for (const auto& o : feasible)
      if (std::abs(o.steps - own_arrival) <= std::abs(best->steps - own_arrival))
        best = &o;
    return {DriveMode::Cruise, best->steps, best->fit};
  }

  if (own_arrival < rel_lo)
  {
    const int first = feasible.front().steps;
    const int last = feasible.back().steps;
    const int target = first + static_cast<int>(std::lround(opts.slowdown_target_fraction * (last - first)));
    const Option* pick = &feasible.front();
    for (const auto& o : feasible)
      if (o.steps <= target)
        pick = &o;
    DriveMode m = pick->fit.cruise_speed > v0 + kSpeedEps ? DriveMode::SpeedUp : DriveMode::SlowDown;
    return {m, pick->steps, pick->fit};
  }

  // Too slow for the window (or below the floor): the latest feasible arrival
  // needs the least extra speed.
  const Option& pick = feasible.back();
  DriveMode m = pick.fit.cruise_speed >= v0 - kSpeedEps ? DriveMode::SpeedUp : DriveMode::SlowDown;
  return {m, pick.steps, pick.fit};
}

DriveMode select_mode(const PlannerContext& ctx, const PlannerOptions& opts)
{
  return choose_arrival(ctx, opts).mode;
}

SpeedProfile plan_eco_profile(const PlannerContext& ctx, const PlannerOptions& opts)
{
  ModeChoice choice = choose_arrival(ctx, opts);
  if (choice.mode == DriveMode::Stop)
    return plan_stop_profile(ctx, ctx.green_window.earliest_pass, opts);
  return build_approach(ctx.current_time, ctx.current_speed, choice.fit, choice.mode);
}

SpeedProfile plan_stop_profile(const PlannerContext& ctx, double depart_time, const PlannerOptions& opts)
{
  if (!(ctx.speed_limit > 0.0) || !(ctx.stopbar_position >= ctx.current_position))
    throw std::invalid_argument("invalid stop planning context");
  const double d = ctx.stopbar_position - ctx.current_position;
  const double v0 = ctx.current_speed;
  const double vfloor = opts.cruise_floor_fraction * ctx.speed_limit;
  const double cap = v0 > 0.0 ? v0 : vfloor;
  const double acc = ramp_accel(ctx, opts);

  SpeedProfile p = start_at(ctx.current_time, v0, DriveMode::Stop);
  if (d > 0.0)
  {
    std::optional<ApproachFit> found;
    // gentle deceleration first, the full comfort bound as a fallback
    for (double dec : {ramp_decel(ctx, opts), -ctx.a_min})
    {
      int first = std::max(1, static_cast<int>(std::floor(d / cap)));
      for (int t = first; t < first + 600 && !found; ++t)
      {
        auto fit = fit_approach(v0, d, t, true, acc, dec);
        if (fit && fit->cruise_speed <= cap + kSpeedEps)
          found = fit;
      }
      if (found)
        break;
    }
    if (!found)
      throw std::domain_error("vehicle cannot stop before the stop bar within the comfort bounds");
    p = build_approach(ctx.current_time, v0, *found, DriveMode::Stop);
  }
  else if (v0 != 0.0)
  {
    throw std::invalid_argument("stop planning at the bar requires a standstill");
  }

  const double arrive = p.end_time();
  const int dwell = std::max(0, static_cast<int>(std::ceil(depart_time - arrive - 1e-9)));
  push_hold(p, 0.0, dwell, DriveMode::Stop);

  const double v_dep = std::clamp(v0, vfloor, ctx.speed_limit);
  push_ramp(p, 0.0, v_dep, ramp_steps(v_dep, acc), DriveMode::Stop);
  return p;
}

namespace
{

// Earliest time to cover d accelerating at a toward vmax from v.
double earliest_arrival(double v, double d, double a, double vmax)
{
  double t_acc = (vmax - v) / a;
  double d_acc = 0.5 * (v + vmax) * t_acc;
  if (d <= d_acc)
    return (-v + std::sqrt(v * v + 2.0 * a * d)) / a;
  return t_acc + (d - d_acc) / vmax;
}

// Speed samples (excluding the current one) that bring v to rest after exactly d.
std::vector<double> brake_to_stop(double v, double d, double decel)
{
  const double tol = 1e-9;
  for (int n = 1; n <= 400; ++n)
  {
    double v1 = (2.0 * d - v) / n;
    if (v1 < -tol || v1 > v + tol || v - v1 > decel + tol)
      continue;
    if (n == 1 ? std::abs(v1) > tol : v1 / (n - 1) > decel + tol)
      continue;
    std::vector<double> out;
    v1 = std::clamp(v1, 0.0, v);
    out.push_back(n == 1 ? 0.0 : v1);
    for (int j = 1; j < n; ++j)
      out.push_back(j == n - 1 ? 0.0 : v1 * (1.0 - static_cast<double>(j) / (n - 1)));
    return out;
  }
  // Too close to stop within the bound: stop as evenly as the distance allows.
  int n = std::max(1, static_cast<int>(std::floor(2.0 * d / std::max(v, tol))));
  double v1 = std::clamp((2.0 * d - v) / n, 0.0, v);
  std::vector<double> out{n == 1 ? 0.0 : v1};
  for (int j = 1; j < n; ++j)
    out.push_back(j == n - 1 ? 0.0 : v1 * (1.0 - static_cast<double>(j) / (n - 1)));
  return out;
}

}  // namespace

SpeedProfile plan_baseline_profile(const PlannerContext& ctx, const traffic::SignalTiming& signal)
{
  if (!(ctx.speed_limit > 0.0) || !(ctx.a_max > 0.0 && ctx.a_min < 0.0))
    throw std::invalid_argument("invalid baseline planning context");
  if (ctx.current_speed < 0.0 || ctx.current_speed > ctx.speed_limit + kSpeedEps)
    throw std::invalid_argument("current speed must lie in [0, speed_limit]");
  signal.validate();

  const double D = ctx.stopbar_position - ctx.current_position;
  const double vmax = ctx.speed_limit;
  const double acc = ctx.a_max;
  const double dec = -ctx.a_min;

  SpeedProfile p;
  p.t0 = ctx.current_time;
  double t = ctx.current_time;
  double s = 0.0;
  double v = ctx.current_speed;
  p.speeds.push_back(v);

  std::vector<double> brake;
  std::size_t brake_at = 0;

  auto go_ok = [&](double d) {
    if (d <= 0.0)
      return true;
    double t_e = earliest_arrival(v, d, acc, vmax);
    double t_l = v > 0.1 ? d / v : t_e;
    double te_abs = t + t_e;
    long c = signal.cycle_index(te_abs);
    return signal.is_green(te_abs) && t + std::max(t_l, t_e) < signal.green_end(c);
  };

  for (int step = 0; step < 100000; ++step)
  {
    const double d = D - s;
    if (d <= 1e-9 && v > 0.0)
      break;

    double v_next;
    const bool at_bar = d <= 1e-6 && v == 0.0;
    if (at_bar)
    {
      v_next = signal.is_green(t) ? std::min(vmax, acc) : 0.0;
      brake.clear();
    }
    else if (!brake.empty())
    {
      if (go_ok(d))
      {
        brake.clear();
        v_next = std::min(vmax, v + acc);
      }
      else
      {
        v_next = brake[brake_at++];
        if (brake_at == brake.size())
          brake.clear();
      }
    }
    else if (go_ok(d))
    {
      v_next = std::min(vmax, v + acc);
    }
    else if (v > 0.0)
    {
      // red ahead: keep driving at the limit and brake as late as the bound allows
      const int n = static_cast<int>(std::floor(2.0 * d / v));
      const int trigger = static_cast<int>(std::ceil(v / dec - 1e-12)) + 2;
      if (n <= trigger)
      {
        brake = brake_to_stop(v, d, dec);
        brake_at = 0;
        v_next = brake[brake_at++];
        if (brake_at == brake.size())
          brake.clear();
      }
      else
      {
        v_next = std::min(vmax, v + acc);
      }
    }
    else
    {
      // at rest short of the bar while red: creep only once it is green
      v_next = signal.is_green(t) ? std::min(vmax, acc) : 0.0;
    }

    p.modes.push_back(tag_for_change(v, v_next));
    s += 0.5 * (v + v_next);
    v = v_next;
    t += 1.0;
    p.speeds.push_back(v);
    if (brake.empty() && v == 0.0 && std::abs(D - s) < 1e-6)
      s = D;  // absorb rounding of the stopping plan
  }
  p.modes.push_back(p.modes.empty() ? DriveMode::Cruise : p.modes.back());
  return p;
}

SpeedProfile plan_cruise_to(double t0, double v0, double distance, double target_speed, double a_max, double a_min,
                            double ramp_fraction, bool stop_at_end)
{
  if (distance < 0.0 || v0 < 0.0 || !(target_speed > 0.0))
    throw std::invalid_argument("invalid cruise request");
  SpeedProfile p = start_at(t0, v0, DriveMode::Cruise);
  if (distance == 0.0)
    return p;
  const double acc = ramp_fraction * a_max;
  const double dec = -ramp_fraction * a_min;
  int first = std::max(1, static_cast<int>(std::lround(distance / target_speed)));
  for (int t = first; t < first + 600; ++t)
  {
    auto fit = fit_approach(v0, distance, t, stop_at_end, acc, dec);
    if (!fit || fit->cruise_speed > std::max(target_speed, v0) + kSpeedEps)
      continue;
    DriveMode m = fit->cruise_speed > v0 + kSpeedEps   ? DriveMode::SpeedUp
                  : fit->cruise_speed < v0 - kSpeedEps ? DriveMode::SlowDown
                                                       : DriveMode::Cruise;
    return build_approach(t0, v0, *fit, m);
  }
  throw std::domain_error("cannot fit a cruise over " + std::to_string(distance) + " m");
}

std::optional<double> crossing_time(const SpeedProfile& profile, double distance)
{
  const auto& v = profile.speeds;
  if (v.empty())
    return std::nullopt;
  if (distance <= 0.0)
    return profile.t0;
  const double dt = profile.dt;
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
  {
    double ds = 0.5 * (v[k] + v[k + 1]) * dt;
    if (s + ds >= distance - 1e-9)
    {
      double rem = std::max(0.0, distance - s);
      // s(tau) = v_k tau + (v_{k+1} - v_k) tau^2 / (2 dt), tau in [0, dt]
      double a = (v[k + 1] - v[k]) / (2.0 * dt);
      double b = v[k];
      double tau;
      if (std::abs(a) < 1e-15)
        tau = b > 0.0 ? rem / b : dt;
      else
        tau = (-b + std::sqrt(std::max(0.0, b * b + 4.0 * a * rem))) / (2.0 * a);
      tau = std::clamp(tau, 0.0, dt);
      double when = profile.t0 + static_cast<double>(k) * dt + tau;
      // a vehicle that reaches the bar at rest crosses when it moves off
      if (v[k + 1] == 0.0 && s + ds <= distance + 1e-9)
      {
        std::size_t j = k + 1;
        while (j + 1 < v.size() && v[j + 1] == 0.0)
          ++j;
        when = profile.t0 + static_cast<double>(j) * dt;
      }
      return when;
    }
    s += ds;
  }
  return std::nullopt;
}

}  // namespace ecohev::planner
