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
#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ecohev/errors.hpp"
#include "ecohev/traffic.hpp"

using namespace ecohev;
using namespace ecohev::traffic;

namespace
{

// Red for the first 30 s of each 60 s cycle, then green.
SignalTiming red_then_green()
{
  return {60.0, 30.0, 30.0, 0.0};
}

}  // namespace

TEST(Shockwave, SpeedFromRankineHugoniot)
{
  EXPECT_NEAR(shockwave_speed({1800, 45}, {0, 150}), -17.142857, 1e-6);
}

TEST(Shockwave, ArgumentOrderGivesSameValue)
{
  EXPECT_NEAR(shockwave_speed({0, 150}, {1800, 45}), -17.142857, 1e-6);
}

TEST(Shockwave, EqualDensityThrows)
{
  EXPECT_THROW(shockwave_speed({1000, 20}, {1000, 20}), EqualDensity);
}

TEST(Signal, CycleIndexAndGreen)
{
  auto s = red_then_green();
  EXPECT_EQ(s.cycle_index(-1.0), -1);
  EXPECT_EQ(s.cycle_index(59.9), 0);
  EXPECT_FALSE(s.is_green(29.9));
  EXPECT_TRUE(s.is_green(30.0));
  EXPECT_FALSE(s.is_green(60.0));
  EXPECT_DOUBLE_EQ(s.green_onset(2), 150.0);
  EXPECT_DOUBLE_EQ(s.green_end(2), 180.0);
}

TEST(Signal, InvalidTimingRejected)
{
  EXPECT_THROW((SignalTiming{0.0, 0.0, 10.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((SignalTiming{60.0, 40.0, 30.0, 0.0}.validate()), std::invalid_argument);
}

TEST(EvolveQueue, ZeroArrivalsNeverQueue)
{
  std::vector<double> arrivals(200, 0.0);
  for (const auto& q : evolve_queue(red_then_green(), arrivals, 1800.0, 0.0, 200))
    EXPECT_EQ(q.queue_length, 0.0);
}

TEST(EvolveQueue, ArrivalsStoppingAtGreenClearIn15Seconds)
{
  std::vector<double> arrivals(60, 0.0);
  std::fill(arrivals.begin(), arrivals.begin() + 30, 900.0);
  auto trace = evolve_queue(red_then_green(), arrivals, 1800.0, 0.0, 60);
  EXPECT_NEAR(trace[30].queue_length, 7.5, 1e-12);
  EXPECT_GT(trace[44].queue_length, 0.0);
  EXPECT_EQ(trace[45].queue_length, 0.0);
}

TEST(EvolveQueue, SteadyArrivalsClearIn30Seconds)
{
  // Arrivals keep joining during green, so the queue shrinks at 0.25 veh/s.
  std::vector<double> arrivals(60, 900.0);
  auto trace = evolve_queue(red_then_green(), arrivals, 1800.0, 0.0, 60);
  EXPECT_NEAR(trace[30].queue_length, 7.5, 1e-12);
  EXPECT_NEAR(trace[45].queue_length, 3.75, 1e-12);
  EXPECT_GT(trace[59].queue_length, 0.0);
  EXPECT_EQ(trace[60].queue_length, 0.0);
}

TEST(EvolveQueue, OversaturatedQueueNeverShrinks)
{
  std::vector<double> arrivals(240, 2400.0);
  auto trace = evolve_queue(red_then_green(), arrivals, 1800.0, 0.0, 240);
  for (std::size_t i = 1; i < trace.size(); ++i)
    EXPECT_GE(trace[i].queue_length, trace[i - 1].queue_length);
}

TEST(EvolveQueue, VehicleConservationExact)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(0.0, 1500.0);
  std::vector<double> arrivals(600);
  for (auto& a : arrivals)
    a = rate(rng);
  QueueModel model;
  model.startup_lost_time = 2.0;
  auto trace = evolve_queue({90.0, 40.0, 35.0, 5.0}, arrivals, 1800.0, 0.0, 600, model);
  double expected_arrivals = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i)
  {
    expected_arrivals += arrivals[i - 1] / 3600.0;
    EXPECT_EQ(trace[i].cumulative_arrivals, expected_arrivals);
    EXPECT_EQ(trace[i].queue_length, trace[i].cumulative_arrivals - trace[i].cumulative_departures);
    EXPECT_GE(trace[i].queue_length, 0.0);
    EXPECT_GE(trace[i].cumulative_departures, trace[i - 1].cumulative_departures);
  }
}

TEST(EvolveQueue, TailPositionUsesJamSpacing)
{
  std::vector<double> arrivals(30, 900.0);
  auto trace = evolve_queue(red_then_green(), arrivals, 1800.0, 0.0, 30);
  EXPECT_NEAR(trace.back().queue_tail_position, 7.5 * 1000.0 / 150.0, 1e-9);
  EXPECT_DOUBLE_EQ(trace.back().formed_at, 0.0);
}

TEST(GreenWindow, EmptyQueueGivesWholeGreen)
{
  QueueEstimate q;
  auto w = predict_green_window({130.0, 100.0, 30.0, 0.0}, q, 1800.0, 0);
  EXPECT_DOUBLE_EQ(w.earliest_pass, 100.0);
  EXPECT_DOUBLE_EQ(w.latest_pass, 130.0);
}

TEST(GreenWindow, NineVehiclesDelayByEighteenSeconds)
{
  QueueEstimate q;
  q.queue_length = 9.0;
  auto w = predict_green_window({130.0, 100.0, 30.0, 0.0}, q, 1800.0, 0);
  EXPECT_DOUBLE_EQ(w.earliest_pass, 118.0);
  EXPECT_DOUBLE_EQ(w.latest_pass, 130.0);
}

TEST(GreenWindow, LongDischargeRollsIntoNextCycle)
{
  QueueEstimate q;
  q.queue_length = 17.5;  // 35 s of discharge
  auto w = predict_green_window({130.0, 100.0, 30.0, 0.0}, q, 1800.0, 0);
  EXPECT_DOUBLE_EQ(w.earliest_pass, 235.0);
  EXPECT_DOUBLE_EQ(w.latest_pass, 260.0);
}

TEST(GreenWindow, QueueBeyondHorizonThrows)
{
  QueueEstimate q;
  q.queue_length = 1000.0;
  EXPECT_THROW(predict_green_window({130.0, 100.0, 30.0, 0.0}, q, 1800.0, 0), NoWindowInHorizon);
}

TEST(GreenWindow, WindowsLieInsideGreen)
{
  SignalTiming s{100.0, 50.0, 40.0, 3.0};
  Intersection x{"a", 300.0, 2, 1800.0, 15.0, 700.0, s};
  QueueModel model{1800.0, 150.0, 2.0, 4};
  for (double t = 0.0; t < 400.0; t += 7.0)
  {
    auto w = next_green_window(x, model, t);
    EXPECT_TRUE(window_inside_green(w, s));
    EXPECT_GT(w.latest_pass, t);
  }
}

TEST(GreenWindow, InsideGreenRejectsRedAndEmpty)
{
  SignalTiming s{100.0, 50.0, 40.0, 0.0};
  EXPECT_FALSE(window_inside_green({40.0, 60.0}, s));
  EXPECT_FALSE(window_inside_green({60.0, 60.0}, s));
  EXPECT_TRUE(window_inside_green({60.0, 90.0}, s));
}

TEST(Corridor, ValidateRejectsUnorderedIntersections)
{
  Corridor c;
  c.length = 1000.0;
  c.speed_limit = 15.0;
  c.intersections.push_back({"b", 600.0, 1, 1800.0, 15.0, 300.0, {90.0, 0.0, 40.0, 0.0}});
  c.intersections.push_back({"a", 400.0, 1, 1800.0, 15.0, 300.0, {90.0, 0.0, 40.0, 0.0}});
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
