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

#include <optional>
#include <string_view>
#include <vector>

#include "ecohev/traffic.hpp"

namespace ecohev::planner
{

enum class DriveMode
{
  SlowDown,
  SpeedUp,
  Cruise,
  Stop
};

std::string_view to_string(DriveMode mode);

/**
 * 1 Hz speed trace. speeds[k] is the speed at t0 + k*dt and modes[k] tags the
 * interval that starts at sample k (the last tag repeats the previous one).
 * Distances use the trapezoidal rule between samples.
 */
struct SpeedProfile
{
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> speeds;
  std::vector<DriveMode> modes;

  std::size_t size() const { return speeds.size(); }
  bool empty() const { return speeds.empty(); }
  double end_time() const;
  double distance() const;
  std::vector<double> positions() const;

  /// Appends another profile whose first sample coincides with this one's last.
  void append(const SpeedProfile& next);

  /// Checks the kinematic invariants; returns a description of the first violation.
  std::optional<std::string> check(double speed_limit, double a_max, double a_min, double tol = 1e-9) const;
};

struct PlannerContext
{
  double current_time = 0.0;      ///< absolute s
  double current_position = 0.0;  ///< m
  double current_speed = 0.0;     ///< m/s
  double stopbar_position = 0.0;  ///< m
  double speed_limit = 0.0;       ///< m/s
  traffic::GreenWindow green_window;
  double a_max = 2.0;   ///< m/s^2
  double a_min = -3.0;  ///< m/s^2

  void validate() const;
};

struct PlannerOptions
{
  double cruise_floor_fraction = 0.7;      ///< lowest cruise speed as a fraction of the limit
  double slowdown_target_fraction = 0.5;   ///< where in the feasible arrivals a slow-down aims
  double ramp_accel_fraction = 0.5;        ///< peak ramp acceleration as a fraction of the comfort bound
};

/// Half-cosine ramp from v0 to vf sampled at 1 Hz; duration + 1 samples.
std::vector<double> trig_segment(double v0, double vf, int duration);

/// Samples needed for a cosine ramp of amplitude dv whose peak slope stays below accel.
int ramp_steps(double dv, double accel);

/// ramp(v0 -> cruise_speed) + cruise + optional ramp(cruise_speed -> 0)
struct ApproachFit
{
  int ramp_in = 0;
  int cruise = 0;
  int ramp_out = 0;
  double cruise_speed = 0.0;

  int steps() const { return ramp_in + cruise + ramp_out; }
};

/**
 * Finds the cruise speed that covers distance in exactly steps seconds with the
 * shape above. Returns nothing when the ramps do not fit or the speed would be negative.
 */
std::optional<ApproachFit> fit_approach(double v0, double distance, int steps, bool stop_at_end, double accel,
                                        double decel);

struct ModeChoice
{
  DriveMode mode = DriveMode::Stop;
  int arrival_steps = 0;  ///< seconds from current_time to the stop-bar crossing (not used for Stop)
  ApproachFit fit;
};

ModeChoice choose_arrival(const PlannerContext& ctx, const PlannerOptions& opts = {});
DriveMode select_mode(const PlannerContext& ctx, const PlannerOptions& opts = {});

/// Eco approach to the stop bar; Stop plans also include the launch after the dwell.
SpeedProfile plan_eco_profile(const PlannerContext& ctx, const PlannerOptions& opts = {});

/// Stop at the bar, dwell until depart_time (absolute), then ramp back to cruise.
SpeedProfile plan_stop_profile(const PlannerContext& ctx, double depart_time, const PlannerOptions& opts = {});

/// Rule-following human driver reacting to the signal only; ends once past the bar.
SpeedProfile plan_baseline_profile(const PlannerContext& ctx, const traffic::SignalTiming& signal);

/// Ramp to target_speed and hold it so that exactly distance is covered, optionally coming to rest at the end.
SpeedProfile plan_cruise_to(double t0, double v0, double distance, double target_speed, double a_max, double a_min,
                            double ramp_fraction = 1.0, bool stop_at_end = false);

/**
 * Time (absolute) at which the profile has covered distance, solving the
 * trapezoidal position within the step. Nothing if never reached.
 */
std::optional<double> crossing_time(const SpeedProfile& profile, double distance);

}  // namespace ecohev::planner
