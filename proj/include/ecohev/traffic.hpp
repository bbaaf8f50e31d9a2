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

#include <span>
#include <string>
#include <vector>

namespace ecohev::traffic
{

/// Fixed-time signal plan for the through movement of one approach.
struct SignalTiming
{
  double cycle_length = 0.0;    ///< s
  double green_start = 0.0;     ///< s after cycle start
  double green_duration = 0.0;  ///< s
  double reference_time = 0.0;  ///< absolute time of the start of cycle 0, s

  void validate() const;

  /// Cycle that contains absolute time t (may be negative before reference_time).
  long cycle_index(double t) const;
  double green_onset(long cycle) const;
  double green_end(long cycle) const;
  bool is_green(double t) const;
};

struct TrafficState
{
  double flow = 0.0;     ///< veh/h
  double density = 0.0;  ///< veh/km
};

struct QueueEstimate
{
  double time = 0.0;                  ///< absolute s
  double queue_length = 0.0;          ///< vehicles per lane, fractional accounting
  double queue_tail_position = 0.0;   ///< m upstream of the stop bar
  double formed_at = 0.0;             ///< s, start of the current queue (== time when empty)
  double cumulative_arrivals = 0.0;   ///< vehicles since t0
  double cumulative_departures = 0.0; ///< vehicles since t0
};

struct GreenWindow
{
  double earliest_pass = 0.0;  ///< absolute s
  double latest_pass = 0.0;    ///< absolute s
};

struct QueueModel
{
  double saturation_flow = 1800.0;  ///< veh/h/lane
  double jam_density = 150.0;       ///< veh/km/lane
  double startup_lost_time = 0.0;   ///< s, only charged when a queue is present
  int max_cycles = 4;               ///< cycles searched by predict_green_window
};

/**
 * Speed of the kinematic wave separating two traffic states (Rankine-Hugoniot).
 * Result in km/h; negative values travel upstream. Throws EqualDensity when the
 * densities coincide.
 */
double shockwave_speed(const TrafficState& upstream, const TrafficState& downstream);

/**
 * Point-queue evolution at a stop bar, sampled every second from t0 to
 * t0 + horizon inclusive. arrivals_vph[i] is the per-lane arrival rate during
 * [t0 + i, t0 + i + 1). Vehicles join the queue on arrival; the queue discharges at
 * saturation flow over the effective green (green minus start-up lost time).
 */
std::vector<QueueEstimate> evolve_queue(const SignalTiming& signal, std::span<const double> arrivals_vph,
                                        double saturation_flow, double t0, int horizon,
                                        const QueueModel& model = {});

/**
 * Window in which a vehicle can pass the stop bar during the green of cycle
 * approach_cycle_index, given the queue present at that cycle's green onset.
 * A queue that needs the whole green rolls its residue into the following cycle.
 */
GreenWindow predict_green_window(const SignalTiming& signal, const QueueEstimate& queue_at_arrival,
                                 double saturation_flow, long approach_cycle_index, const QueueModel& model = {});

/// True if [earliest, latest] is non-empty and sits inside a single green phase.
bool window_inside_green(const GreenWindow& window, const SignalTiming& signal);

/// One signalized intersection along the corridor.
struct Intersection
{
  std::string name;
  double position = 0.0;             ///< m from corridor start to the stop bar
  int lanes = 1;
  double saturation_flow = 1800.0;   ///< veh/h/lane
  double speed_limit = 0.0;          ///< m/s on the approach
  double arrival_flow = 0.0;         ///< veh/h, whole approach
  SignalTiming signal;
};

struct Corridor
{
  double length = 0.0;       ///< m
  double speed_limit = 0.0;  ///< m/s beyond the last intersection
  double jam_density = 150.0;
  double startup_lost_time = 0.0;
  int max_cycles = 4;
  std::vector<Intersection> intersections;

  void validate() const;
  QueueModel queue_model(const Intersection& x) const;
};

/**
 * Queue-aware green window for a vehicle that cannot reach the stop bar before
 * absolute time earliest_arrival. Evaluates the queue built by the approach's
 * background flow at each candidate green onset and returns the first window
 * that closes after earliest_arrival.
 */
GreenWindow next_green_window(const Intersection& x, const QueueModel& model, double earliest_arrival);

}  // namespace ecohev::traffic
