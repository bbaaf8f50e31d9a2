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
#include "ecohev/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecohev/errors.hpp"

namespace ecohev::traffic
{

void SignalTiming::validate() const
{
  if (!(cycle_length > 0.0))
    throw std::invalid_argument("signal cycle_length must be positive");
  if (!(green_duration > 0.0 && green_duration < cycle_length))
    throw std::invalid_argument("signal green_duration must lie in (0, cycle_length)");
  if (!(green_start >= 0.0 && green_start + green_duration <= cycle_length))
    throw std::invalid_argument("signal green phase must fit inside the cycle");
}

long SignalTiming::cycle_index(double t) const
{
  return static_cast<long>(std::floor((t - reference_time) / cycle_length));
}

double SignalTiming::green_onset(long cycle) const
{
  return reference_time + static_cast<double>(cycle) * cycle_length + green_start;
}

double SignalTiming::green_end(long cycle) const
{
  return green_onset(cycle) + green_duration;
}

bool SignalTiming::is_green(double t) const
{
  long c = cycle_index(t);
  return t >= green_onset(c) && t < green_end(c);
}

double shockwave_speed(const TrafficState& upstream, const TrafficState& downstream)
{
  double dk = downstream.density - upstream.density;
  if (dk == 0.0)
    throw EqualDensity("shockwave speed undefined for equal densities");
  return (downstream.flow - upstream.flow) / dk;
}

namespace
{

// Length of [a, b) covered by effective green (onset + lost .. end) in any cycle.
double effective_green_overlap(const SignalTiming& s, double lost, double a, double b)
{
  double total = 0.0;
  for (long c = s.cycle_index(a) - 1; c <= s.cycle_index(b) + 1; ++c)
  {
    double lo = std::max(a, s.green_onset(c) + lost);
    double hi = std::min(b, s.green_end(c));
    if (hi > lo)
      total += hi - lo;
  }
  return total;
}

}  // namespace

std::vector<QueueEstimate> evolve_queue(const SignalTiming& signal, std::span<const double> arrivals_vph,
                                        double saturation_flow, double t0, int horizon, const QueueModel& model)
{
  signal.validate();
  if (horizon <= 0)
    throw std::invalid_argument("evolve_queue horizon must be positive");
  if (!(saturation_flow > 0.0))
    throw std::invalid_argument("evolve_queue saturation_flow must be positive");
  if (arrivals_vph.size() < static_cast<std::size_t>(horizon))
    throw std::invalid_argument("arrival trace does not cover the horizon");
  if (!(model.jam_density > 0.0) || model.startup_lost_time < 0.0)
    throw std::invalid_argument("invalid queue model");

  const double spacing = 1000.0 / model.jam_density;
  std::vector<QueueEstimate> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);

  double arrived = 0.0;
  double departed = 0.0;
  double formed_at = t0;
  out.push_back({t0, 0.0, 0.0, t0, 0.0, 0.0});

  for (int i = 0; i < horizon; ++i)
  {
    double a = t0 + i;
    double rate = arrivals_vph[static_cast<std::size_t>(i)];
    if (rate < 0.0)
      throw std::invalid_argument("arrival rates must be non-negative");
    bool was_empty = (arrived - departed) == 0.0;

    arrived += rate / 3600.0;
    double waiting = arrived - departed;
    double capacity = saturation_flow / 3600.0 * effective_green_overlap(signal, model.startup_lost_time, a, a + 1.0);
    if (capacity >= waiting)
      departed = arrived;  // queue fully served; keep the difference exactly zero
    else
      departed += capacity;

    double q = arrived - departed;
    if (q > 0.0 && was_empty)
      formed_at = a;
    if (q == 0.0)
      formed_at = a + 1.0;
    out.push_back({a + 1.0, q, q * spacing, formed_at, arrived, departed});
  }
  return out;
}

GreenWindow predict_green_window(const SignalTiming& signal, const QueueEstimate& queue_at_arrival,
                                 double saturation_flow, long approach_cycle_index, const QueueModel& model)
{
  signal.validate();
  if (!(saturation_flow > 0.0))
    throw std::invalid_argument("predict_green_window saturation_flow must be positive");
  if (queue_at_arrival.queue_length < 0.0)
    throw std::invalid_argument("queue length must be non-negative");

  double q = queue_at_arrival.queue_length;
  double discharge = q > 0.0 ? model.startup_lost_time + q * 3600.0 / saturation_flow : 0.0;
  for (int k = 0; k < std::max(1, model.max_cycles); ++k)
  {
    long c = approach_cycle_index + k;
    if (discharge < signal.green_duration)
      return {signal.green_onset(c) + discharge, signal.green_end(c)};
    discharge -= signal.green_duration;
  }
  throw NoWindowInHorizon("queue does not clear within " + std::to_string(model.max_cycles) + " cycles");
}

bool window_inside_green(const GreenWindow& w, const SignalTiming& s)
{
  if (!(w.earliest_pass < w.latest_pass))
    return false;
  long c = s.cycle_index(w.earliest_pass);
  // latest_pass may coincide with the green end, which is the start of red
  return w.earliest_pass >= s.green_onset(c) && w.latest_pass <= s.green_end(c);
}

void Corridor::validate() const
{
  if (length < 0.0)
    throw std::invalid_argument("corridor length must be non-negative");
  if (!(speed_limit > 0.0))
    throw std::invalid_argument("corridor speed limit must be positive");
  double prev = 0.0;
  for (const auto& x : intersections)
  {
    if (!(x.position > prev) || x.position >= length)
      throw std::invalid_argument("intersection '" + x.name + "' must lie strictly inside the corridor, in order");
    if (x.lanes < 1 || !(x.saturation_flow > 0.0) || !(x.speed_limit > 0.0) || x.arrival_flow < 0.0)
      throw std::invalid_argument("intersection '" + x.name + "' has invalid lane/flow/speed data");
    x.signal.validate();
    prev = x.position;
  }
}

QueueModel Corridor::queue_model(const Intersection& x) const
{
  return {x.saturation_flow, jam_density, startup_lost_time, max_cycles};
}

GreenWindow next_green_window(const Intersection& x, const QueueModel& model, double earliest_arrival)
{
  const SignalTiming& s = x.signal;
  const double per_lane = x.arrival_flow / x.lanes;
  // Two full cycles of constant arrivals settle an undersaturated queue.
  const int warmup = static_cast<int>(std::ceil(2.0 * s.cycle_length));
  std::vector<double> arrivals(static_cast<std::size_t>(warmup), per_lane);

  for (long c = s.cycle_index(earliest_arrival) - 1, tries = 0; tries < 16; ++c, ++tries)
  {
    double onset = s.green_onset(c);
    double start = onset - warmup;
    auto trace = evolve_queue(s, arrivals, x.saturation_flow, start, warmup, model);
    GreenWindow w = predict_green_window(s, trace.back(), x.saturation_flow, c, model);
    if (w.latest_pass > earliest_arrival)
      return w;
  }
  throw NoWindowInHorizon("no green window after t=" + std::to_string(earliest_arrival) + " at " + x.name);
}

}  // namespace ecohev::traffic
