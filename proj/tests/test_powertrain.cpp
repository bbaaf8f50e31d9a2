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

#include "ecohev/config.hpp"
#include "ecohev/errors.hpp"
#include "ecohev/powertrain.hpp"

using namespace ecohev;
using namespace ecohev::powertrain;

namespace
{

EngineMaps small_engine()
{
  LinearTable ool({0.0, 10000.0, 20000.0}, {100.0, 150.0, 250.0});
  GridMap2D fuel({100.0, 300.0}, {0.0, 20000.0}, {0.1, 1.1, 0.3, 1.5});
  return EngineMaps(20000.0, ool, fuel);
}

SocModelParams default_soc_model()
{
  SocModelParams m;
  m.xi = {-2.1367521367521368e-07, -8.547008547008547e-13, -1.7094017094017094e-12,
          -2.1367521367521368e-07, -8.547008547008547e-13, 0.0,
          -2.1367521367521368e-07, -8.547008547008547e-13, 0.0};
  return m;
}

planner::SpeedProfile profile(std::vector<double> v)
{
  planner::SpeedProfile p;
  p.speeds = std::move(v);
  p.modes.assign(p.speeds.size(), planner::DriveMode::Cruise);
  return p;
}

}  // namespace

TEST(TractionPower, StandstillIsZero)
{
  for (double p : traction_power(profile({0.0, 0.0, 0.0, 0.0}), VehicleParams{}))
    EXPECT_EQ(p, 0.0);
}

TEST(TractionPower, SteadyRoadLoad)
{
  // (1530*9.81*0.009 + 0.5*1.2*0.58*15^2) * 15 / 0.9
  auto p = traction_power(profile({15.0, 15.0}), VehicleParams{});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0], 3556.395, 1e-9);
}

TEST(TractionPower, BrakingIsRegenScaledAndClamped)
{
  auto p = traction_power(profile({15.0, 14.0, 9.0}), VehicleParams{});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0], -13415.755395, 1e-6);
  EXPECT_EQ(p[1], -25000.0);
}

TEST(SocModel, ZeroCoefficientsKeepSoc)
{
  SocModelParams m;
  auto r = soc_step({0.55}, 12000.0, 1700.0, true, m);
  EXPECT_EQ(r.state.soc, 0.55);
  EXPECT_FALSE(r.saturated);
}

TEST(SocModel, DefaultCalibrationPoint)
{
  EXPECT_NEAR(default_soc_model().delta(5000.0, 1700.0, true), -0.0014699914529914533, 1e-15);
}

TEST(SocModel, SaturatesAtBounds)
{
  SocModelParams m;
  m.xi[5] = -0.5;
  auto r = soc_step({0.6}, 0.0, 0.0, true, m);
  EXPECT_TRUE(r.saturated);
  EXPECT_EQ(r.state.soc, m.soc_min);
}

TEST(SocModel, DefaultCalibrationDischargeMonotone)
{
  EXPECT_TRUE(default_soc_model().discharge_monotone(-25000.0, 25000.0, 1700.0));
}

TEST(EngineMaps, OperatingLineAtKnot)
{
  EXPECT_EQ(small_engine().optimal_operating_line(10000.0), 150.0);
}

TEST(EngineMaps, OperatingLineMidway)
{
  EXPECT_DOUBLE_EQ(small_engine().optimal_operating_line(15000.0), 200.0);
}

TEST(EngineMaps, AboveMaximumIsOutOfEnvelope)
{
  EXPECT_THROW(small_engine().optimal_operating_line(20001.0), OutOfEnvelope);
}

TEST(EngineMaps, EngineOffBurnsNothing)
{
  EXPECT_EQ(small_engine().fuel_rate(0.0, 0.0), 0.0);
}

TEST(EngineMaps, GridNodeAndCellCentre)
{
  auto e = small_engine();
  EXPECT_EQ(e.fuel_rate(300.0, 20000.0), 1.5);
  EXPECT_DOUBLE_EQ(e.fuel_rate(200.0, 10000.0), (0.1 + 1.1 + 0.3 + 1.5) / 4.0);
}

TEST(EngineMaps, OutsideFuelMapThrows)
{
  EXPECT_THROW(small_engine().fuel_rate(400.0, 1000.0), OutOfEnvelope);
}

TEST(RuleBased, StandstillRunsAuxOnBattery)
{
  RuleBasedParams rules;
  for (double soc : {0.45, 0.6, 0.75})
  {
    auto r = rule_based_split(0.0, 1700.0, 0.0, {soc}, rules, small_engine(), BatteryParams{});
    EXPECT_EQ(r.decision.e_mode, EngineMode::Off);
    EXPECT_EQ(r.decision.p_bat, 1700.0);
  }
}

TEST(RuleBased, HighDemandStartsEngine)
{
  auto r = rule_based_split(15000.0, 1700.0, 10.0, {0.6}, RuleBasedParams{}, small_engine(), BatteryParams{});
  EXPECT_EQ(r.decision.e_mode, EngineMode::On);
  EXPECT_GT(r.engine.p_eng, 0.0);
}

TEST(RuleBased, LowSocEngineRecharges)
{
  SocModelParams m;
  auto r = rule_based_split(5000.0, 1700.0, 10.0, {m.soc_min}, RuleBasedParams{}, small_engine(), BatteryParams{});
  EXPECT_EQ(r.decision.e_mode, EngineMode::On);
  EXPECT_LT(r.decision.p_bat - 1700.0, 0.0);
  EXPECT_NEAR(r.engine.p_eng + r.decision.p_bat, 6700.0, 1e-9);
}

TEST(RuleBased, HysteresisKeepsRunningEngineOn)
{
  RuleBasedParams rules;
  BatteryParams bat;
  auto off = rule_based_split(10000.0, 1700.0, 10.0, {0.61}, rules, small_engine(), bat, EngineMode::Off);
  auto on = rule_based_split(10000.0, 1700.0, 10.0, {0.61}, rules, small_engine(), bat, EngineMode::On);
  EXPECT_EQ(off.decision.e_mode, EngineMode::Off);
  EXPECT_EQ(on.decision.e_mode, EngineMode::On);
  auto stop = rule_based_split(5000.0, 1700.0, 10.0, {0.61}, rules, small_engine(), bat, EngineMode::On);
  EXPECT_EQ(stop.decision.e_mode, EngineMode::Off);
}

TEST(RuleBased, PowerBalanceHolds)
{
  RuleBasedParams rules;
  for (double p : {-20000.0, -3000.0, 0.0, 4000.0, 13000.0, 30000.0})
    for (double soc : {0.5, 0.59, 0.7})
    {
      auto r = rule_based_split(p, 1700.0, 8.0, {soc}, rules, small_engine(), BatteryParams{});
      double engine = r.decision.e_mode == EngineMode::On ? r.engine.p_eng : 0.0;
      double supplied = engine + r.decision.p_bat;
      EXPECT_NEAR(supplied, std::max(p + 1700.0, -25000.0), 1e-9);
    }
}

TEST(RuleBased, InfeasibleDemandThrows)
{
  EXPECT_THROW(rule_based_split(50000.0, 1700.0, 20.0, {0.6}, RuleBasedParams{}, small_engine(), BatteryParams{}),
               InfeasibleDemand);
}

TEST(DefaultMaps, LoadAndCoverEnvelope)
{
  auto j = harness::parse_config_text(R"({"a": 1})", "inline");
  EXPECT_EQ(j["a"], 1);
  auto sc = harness::load_scenario(ECOHEV_SOURCE_DIR "/data/scenario_default.json");
  const auto& e = sc.powertrain.engine;
  for (double p = 500.0; p <= e.p_max(); p += 500.0)
  {
    auto op = e.operate(p);
    EXPECT_GT(op.fuel_rate, 0.0);
  }
  EXPECT_TRUE(sc.powertrain.soc_model.discharge_monotone(-25000.0, 25000.0, sc.powertrain.p_aux));
}
