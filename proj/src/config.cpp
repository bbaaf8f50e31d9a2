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
#include "ecohev/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecohev/errors.hpp"

namespace ecohev::harness
{

namespace
{

constexpr int kSchemaVersion = 1;

// Typed access to one JSON object that rejects keys nobody asked for.
class Reader
{
public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where))
  {
    if (!j_.is_object())
      fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double num(const std::string& key, double def)
  {
    seen_.insert(key);
    if (!j_.contains(key))
      return def;
    return number(key);
  }

  double num(const std::string& key)
  {
    require(key);
    return number(key);
  }

  int integer(const std::string& key, int def)
  {
    seen_.insert(key);
    if (!j_.contains(key))
      return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer())
      fail("'" + key + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool def)
  {
    seen_.insert(key);
    if (!j_.contains(key))
      return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean())
      fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key)
  {
    require(key);
    const auto& v = j_.at(key);
    if (!v.is_string())
      fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string str(const std::string& key, const std::string& def) { return has(key) ? str(key) : (seen_.insert(key), def); }

  std::vector<double> vec(const std::string& key)
  {
    require(key);
    const auto& v = j_.at(key);
    if (!v.is_array())
      fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v)
    {
      if (!x.is_number())
        fail("'" + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  // Row-major flattening of an array of equally long numeric rows.
  std::vector<double> matrix(const std::string& key, std::size_t rows, std::size_t cols)
  {
    require(key);
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != rows)
      fail("'" + key + "' must have " + std::to_string(rows) + " rows");
    std::vector<double> out;
    for (const auto& row : v)
    {
      if (!row.is_array() || row.size() != cols)
        fail("each row of '" + key + "' must have " + std::to_string(cols) + " entries");
      for (const auto& x : row)
      {
        if (!x.is_number())
          fail("'" + key + "' must contain numbers only");
        out.push_back(x.get<double>());
      }
    }
    return out;
  }

  Reader child(const std::string& key)
  {
    require(key);
    return Reader(j_.at(key), where_ + "." + key);
  }

  const json& raw(const std::string& key)
  {
    require(key);
    return j_.at(key);
  }

  void finish() const
  {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        fail("unknown key '" + item.key() + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where_ + ": " + msg); }

  const std::string& where() const { return where_; }

private:
  void require(const std::string& key)
  {
    seen_.insert(key);
    if (!j_.contains(key))
      fail("missing required key '" + key + "'");
  }

  double number(const std::string& key) const
  {
    const auto& v = j_.at(key);
    if (!v.is_number())
      fail("'" + key + "' must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
      fail("'" + key + "' must be finite");
    return x;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void check_schema(Reader& r, const std::string& expected)
{
  std::string schema = r.str("schema");
  if (schema != expected)
    r.fail("schema is '" + schema + "', expected '" + expected + "'");
  int version = r.integer("schema_version", -1);
  if (version != kSchemaVersion)
    r.fail("unsupported schema_version " + std::to_string(version));
}

std::string species_key(thermal::Species s)
{
  return s == thermal::Species::HC ? "hc" : s == thermal::Species::CO ? "co" : "nox";
}

json with_schema(const std::string& name)
{
  return json{{"schema", name}, {"schema_version", kSchemaVersion}};
}

// Module validators throw invalid_argument; surface them as configuration errors.
template <class F>
void validated(const std::string& where, F&& f)
{
  try
  {
    f();
  }
  catch (const ConfigError&)
  {
    throw;
  }
  catch (const std::exception& e)
  {
    throw ConfigError(where + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridMap2D grid_from(Reader& r, const std::string& key, const std::vector<double>& omega, const std::vector<double>& power)
{
  auto values = r.matrix(key, omega.size(), power.size());
  GridMap2D m;
  validated(r.where() + "." + key, [&] { m = GridMap2D(omega, power, values); });
  return m;
}

json grid_rows(const GridMap2D& m)
{
  json rows = json::array();
  for (std::size_t i = 0; i < m.row_knots().size(); ++i)
  {
    json row = json::array();
    for (std::size_t j = 0; j < m.col_knots().size(); ++j)
      row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string_view to_string(ControllerKind c)
{
  return c == ControllerKind::RuleBased ? "rule" : "dp";
}

std::string_view to_string(PlannerKind p)
{
  return p == PlannerKind::Baseline ? "baseline" : "eco";
}

ControllerKind parse_controller(std::string_view s)
{
  if (s == "rule")
    return ControllerKind::RuleBased;
  if (s == "dp")
    return ControllerKind::DP;
  throw ConfigError("controller must be 'rule' or 'dp', got '" + std::string(s) + "'");
}

PlannerKind parse_planner(std::string_view s)
{
  if (s == "baseline")
    return PlannerKind::Baseline;
  if (s == "eco")
    return PlannerKind::Eco;
  throw ConfigError("planner must be 'baseline' or 'eco', got '" + std::string(s) + "'");
}

std::vector<double> DpSettings::soc_grid() const
{
  validate();
  int n = static_cast<int>(std::lround((soc_max - soc_min) / soc_step));
  std::vector<double> g;
  for (int i = 0; i <= n; ++i)
    g.push_back(soc_min + i * soc_step);
  g.back() = soc_max;
  return g;
}

std::vector<double> DpSettings::p_bat_grid(const powertrain::BatteryParams& b) const
{
  validate();
  std::vector<double> g;
  long lo = static_cast<long>(std::ceil(b.p_bat_min / p_bat_step - 1e-9));
  long hi = static_cast<long>(std::floor(b.p_bat_max / p_bat_step + 1e-9));
  for (long i = lo; i <= hi; ++i)
    g.push_back(static_cast<double>(i) * p_bat_step);
  return g;
}

void DpSettings::validate() const
{
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
    throw ConfigError("dp SOC grid bounds must satisfy 0 <= soc_min < soc_max <= 1");
  if (!(soc_step > 0.0) || soc_step > soc_max - soc_min)
    throw ConfigError("dp soc_step must be positive and no larger than the grid span");
  double n = (soc_max - soc_min) / soc_step;
  if (std::abs(n - std::round(n)) > 1e-6)
    throw ConfigError("dp soc_step must divide the SOC grid span");
  if (!(p_bat_step > 0.0))
    throw ConfigError("dp p_bat_step must be positive");
  if (terminal_weight < 0.0 || (terminal_linear_weight && *terminal_linear_weight < 0.0))
    throw ConfigError("dp terminal weights must be non-negative");
}

void Scenario::validate() const
{
  validated("corridor", [&] { corridor.validate(); });
  validated("powertrain", [&] {
    powertrain.vehicle.validate();
    powertrain.battery.validate();
    powertrain.soc_model.validate();
  });
  validated("thermal", [&] { thermal.params.validate(); });
  dp.validate();
  if (!(a_max > 0.0 && a_min < 0.0))
    throw ConfigError("comfort bounds must satisfy a_min < 0 < a_max");
  const double vlim = corridor.intersections.empty() ? corridor.speed_limit
                                                     : corridor.intersections.front().speed_limit;
  if (!(initial.v0 >= 0.0) || initial.v0 > vlim)
    throw ConfigError("initial speed must lie in [0, speed limit]");
  if (!(initial.soc0 >= powertrain.soc_model.soc_min && initial.soc0 <= powertrain.soc_model.soc_max))
    throw ConfigError("initial SOC must lie within the SOC model bounds");
  if (!(initial.soc0 >= dp.soc_min && initial.soc0 <= dp.soc_max))
    throw ConfigError("initial SOC must lie within the DP grid");
  if (batch.n < 0)
    throw ConfigError("batch size must be non-negative");
  if (!(batch.v0_min_kmh > 0.0 && batch.v0_min_kmh <= batch.v0_max_kmh) || batch.v0_max_kmh / 3.6 > vlim)
    throw ConfigError("batch initial speed range must be positive and within the speed limit");
  if (batch.entry_interval < 0.0)
    throw ConfigError("batch entry interval must be non-negative");
}

std::string fnv1a_hex(std::string_view data)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4)
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

json parse_config_text(const std::string& text, const std::string& origin)
{
  try
  {
    return json::parse(text, nullptr, true, true);
  }
  catch (const json::parse_error& e)
  {
    throw ConfigError(origin + ": " + e.what());
  }
}

traffic::Corridor corridor_from_json(const json& j)
{
  Reader r(j, "corridor");
  check_schema(r, "ecohev.corridor");
  traffic::Corridor c;
  c.length = r.num("length");
  c.speed_limit = r.num("speed_limit");
  c.jam_density = r.num("jam_density", c.jam_density);
  c.startup_lost_time = r.num("startup_lost_time", c.startup_lost_time);
  c.max_cycles = r.integer("max_cycles", c.max_cycles);
  const json& list = r.raw("intersections");
  if (!list.is_array())
    r.fail("'intersections' must be an array");
  for (std::size_t i = 0; i < list.size(); ++i)
  {
    Reader x(list[i], "corridor.intersections[" + std::to_string(i) + "]");
    traffic::Intersection in;
    in.name = x.str("name", "signal " + std::to_string(i + 1));
    in.position = x.num("position");
    in.lanes = x.integer("lanes", in.lanes);
    in.saturation_flow = x.num("saturation_flow", in.saturation_flow);
    in.speed_limit = x.num("speed_limit", c.speed_limit);
    in.arrival_flow = x.num("arrival_flow", in.arrival_flow);
    Reader s = x.child("signal");
    in.signal.cycle_length = s.num("cycle_length");
    in.signal.green_start = s.num("green_start", 0.0);
    in.signal.green_duration = s.num("green_duration");
    in.signal.reference_time = s.num("reference_time", 0.0);
    s.finish();
    x.finish();
    c.intersections.push_back(in);
  }
  r.finish();
  validated("corridor", [&] { c.validate(); });
  return c;
}

json corridor_to_json(const traffic::Corridor& c)
{
  json j = with_schema("ecohev.corridor");
  j["length"] = c.length;
  j["speed_limit"] = c.speed_limit;
  j["jam_density"] = c.jam_density;
  j["startup_lost_time"] = c.startup_lost_time;
  j["max_cycles"] = c.max_cycles;
  j["intersections"] = json::array();
  for (const auto& x : c.intersections)
  {
    j["intersections"].push_back({{"name", x.name},
                                  {"position", x.position},
                                  {"lanes", x.lanes},
                                  {"saturation_flow", x.saturation_flow},
                                  {"speed_limit", x.speed_limit},
                                  {"arrival_flow", x.arrival_flow},
                                  {"signal",
                                   {{"cycle_length", x.signal.cycle_length},
                                    {"green_start", x.signal.green_start},
                                    {"green_duration", x.signal.green_duration},
                                    {"reference_time", x.signal.reference_time}}}});
  }
  return j;
}

powertrain::EngineMaps engine_maps_from_json(const json& j)
{
  Reader r(j, "engine_maps");
  check_schema(r, "ecohev.engine_maps");
  double p_max = r.num("p_max");
  Reader ool = r.child("ool");
  auto ool_p = ool.vec("power");
  auto ool_w = ool.vec("omega");
  ool.finish();
  Reader fuel = r.child("fuel");
  auto omega = fuel.vec("omega");
  auto power = fuel.vec("power");
  GridMap2D fuel_map = grid_from(fuel, "values", omega, power);
  fuel.finish();
  r.finish();
  powertrain::EngineMaps m;
  validated("engine_maps", [&] { m = powertrain::EngineMaps(p_max, LinearTable(ool_p, ool_w), fuel_map); });
  const auto& g = m.fuel_map();
  if (!g.contains(ool_w.front(), 0.0) || !g.contains(ool_w.back(), p_max))
    throw ConfigError("engine_maps: fuel map must cover the operating line up to p_max");
  return m;
}

json engine_maps_to_json(const powertrain::EngineMaps& m)
{
  json j = with_schema("ecohev.engine_maps");
  j["p_max"] = m.p_max();
  j["ool"] = {{"power", m.ool().x()}, {"omega", m.ool().y()}};
  j["fuel"] = {{"omega", m.fuel_map().row_knots()}, {"power", m.fuel_map().col_knots()},
               {"values", grid_rows(m.fuel_map())}};
  return j;
}

thermal::EmissionMaps emission_maps_from_json(const json& j)
{
  Reader r(j, "emission_maps");
  check_schema(r, "ecohev.emission_maps");
  auto omega = r.vec("omega");
  auto power = r.vec("power");
  GridMap2D hc = grid_from(r, "hc", omega, power);
  GridMap2D co = grid_from(r, "co", omega, power);
  GridMap2D nox = grid_from(r, "nox", omega, power);
  r.finish();
  thermal::EmissionMaps m;
  validated("emission_maps", [&] { m = thermal::EmissionMaps(hc, co, nox); });
  return m;
}

json emission_maps_to_json(const thermal::EmissionMaps& m)
{
  json j = with_schema("ecohev.emission_maps");
  const auto& hc = m.map(thermal::Species::HC);
  j["omega"] = hc.row_knots();
  j["power"] = hc.col_knots();
  for (auto s : thermal::kAllSpecies)
    j[species_key(s)] = grid_rows(m.map(s));
  return j;
}

json efficiency_curves_to_json(const thermal::CatalystCurves& c, double t_lo, double t_hi, double step)
{
  if (!(step > 0.0) || t_hi < t_lo)
    throw std::invalid_argument("invalid efficiency table range");
  json j = with_schema("ecohev.efficiency_table");
  json temps = json::array();
  json rows = json::object();
  int n = static_cast<int>(std::floor((t_hi - t_lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i)
    temps.push_back(t_lo + i * step);
  for (auto s : thermal::kAllSpecies)
  {
    json eta = json::array();
    for (const auto& t : temps)
      eta.push_back(thermal::conversion_efficiency(t.get<double>(), c[s]));
    rows[species_key(s)] = eta;
  }
  j["temperature"] = temps;
  j["efficiency"] = rows;
  return j;
}

PowertrainConfig powertrain_from_json(const json& j, const json& engine_maps)
{
  Reader r(j, "powertrain");
  check_schema(r, "ecohev.powertrain");
  r.str("engine_maps", "");
  PowertrainConfig p;
  p.p_aux = r.num("aux_power", p.p_aux);
  p.ac_on = r.boolean("ac_on", p.ac_on);

  Reader v = r.child("vehicle");
  p.vehicle.mass = v.num("mass", p.vehicle.mass);
  p.vehicle.drag_area = v.num("drag_area", p.vehicle.drag_area);
  p.vehicle.rolling_coeff = v.num("rolling_coeff", p.vehicle.rolling_coeff);
  p.vehicle.air_density = v.num("air_density", p.vehicle.air_density);
  p.vehicle.driveline_efficiency = v.num("driveline_efficiency", p.vehicle.driveline_efficiency);
  p.vehicle.regen_efficiency = v.num("regen_efficiency", p.vehicle.regen_efficiency);
  p.vehicle.regen_power_limit = v.num("regen_power_limit", p.vehicle.regen_power_limit);
  v.finish();

  Reader b = r.child("battery");
  p.battery.capacity_kwh = b.num("capacity_kwh", p.battery.capacity_kwh);
  p.battery.p_bat_min = b.num("p_bat_min", p.battery.p_bat_min);
  p.battery.p_bat_max = b.num("p_bat_max", p.battery.p_bat_max);
  b.finish();

  Reader s = r.child("soc_model");
  auto xi = s.vec("xi");
  if (xi.size() != p.soc_model.xi.size())
    s.fail("'xi' must have 9 coefficients");
  std::copy(xi.begin(), xi.end(), p.soc_model.xi.begin());
  p.soc_model.soc_min = s.num("soc_min", p.soc_model.soc_min);
  p.soc_model.soc_max = s.num("soc_max", p.soc_model.soc_max);
  s.finish();

  Reader rb = r.child("rule_based");
  p.rules.soc_target = rb.num("soc_target", p.rules.soc_target);
  p.rules.soc_low = rb.num("soc_low", p.rules.soc_low);
  p.rules.p_on_threshold = rb.num("p_on_threshold", p.rules.p_on_threshold);
  p.rules.p_off_threshold = rb.num("p_off_threshold", p.rules.p_off_threshold);
  p.rules.charge_gain = rb.num("charge_gain", p.rules.charge_gain);
  p.rules.p_charge_min = rb.num("p_charge_min", p.rules.p_charge_min);
  p.rules.p_charge_max = rb.num("p_charge_max", p.rules.p_charge_max);
  p.rules.p_eng_min = rb.num("p_eng_min", p.rules.p_eng_min);
  rb.finish();
  r.finish();

  if (p.p_aux < 0.0)
    throw ConfigError("powertrain: aux_power must be non-negative");
  if (p.rules.p_off_threshold > p.rules.p_on_threshold || p.rules.soc_low > p.rules.soc_target)
    throw ConfigError("powertrain.rule_based: stop thresholds must not exceed start thresholds");
  if (!(p.rules.p_eng_min > 0.0) || p.rules.p_charge_min < 0.0 ||
      p.rules.p_charge_max < p.rules.p_charge_min || p.rules.charge_gain < 0.0)
    throw ConfigError("powertrain.rule_based: engine minimum must be positive and charge terms non-negative");
  p.engine = engine_maps_from_json(engine_maps);
  validated("powertrain", [&] {
    p.vehicle.validate();
    p.battery.validate();
    p.soc_model.validate();
  });
  if (!p.soc_model.discharge_monotone(p.battery.p_bat_min - p.p_aux, p.battery.p_bat_max - p.p_aux, p.p_aux))
    throw ConfigError("powertrain.soc_model: SOC must decrease with motor power over the battery envelope");
  return p;
}

ThermalConfig thermal_from_json(const json& j, const json& emission_maps)
{
  Reader r(j, "thermal");
  check_schema(r, "ecohev.thermal");
  r.str("emission_maps", "");
  ThermalConfig t;
  auto& p = t.params;
  t.t_amb = r.num("ambient_temp", t.t_amb);
  p.engine_thermal_mass = r.num("engine_thermal_mass", p.engine_thermal_mass);
  p.cat_thermal_mass = r.num("cat_thermal_mass", p.cat_thermal_mass);
  p.thermostat_temp = r.num("thermostat_temp", p.thermostat_temp);
  p.radiator_gain = r.num("radiator_gain", p.radiator_gain);
  p.conv_coeff_base = r.num("conv_coeff_base", p.conv_coeff_base);
  p.conv_coeff_speed = r.num("conv_coeff_speed", p.conv_coeff_speed);
  p.exhaust_heat_fraction = r.num("exhaust_heat_fraction", p.exhaust_heat_fraction);
  p.coolant_heat_fraction = r.num("coolant_heat_fraction", p.coolant_heat_fraction);
  p.fuel_lhv = r.num("fuel_lhv", p.fuel_lhv);
  p.stoich_afr = r.num("stoich_afr", p.stoich_afr);
  p.exhaust_cp = r.num("exhaust_cp", p.exhaust_cp);
  p.cat_ambient_loss = r.num("cat_ambient_loss", p.cat_ambient_loss);
  if (r.has("reaction_enthalpy"))
  {
    Reader h = r.child("reaction_enthalpy");
    for (auto s : thermal::kAllSpecies)
      p.reaction_enthalpy[s] = h.num(species_key(s), p.reaction_enthalpy[s]);
    h.finish();
  }
  if (r.has("curves"))
  {
    Reader c = r.child("curves");
    for (auto s : thermal::kAllSpecies)
    {
      std::string key = species_key(s);
      if (!c.has(key))
        continue;
      auto& curve = s == thermal::Species::HC ? p.curves.hc : s == thermal::Species::CO ? p.curves.co : p.curves.nox;
      Reader e = c.child(key);
      curve.t50 = e.num("t50", curve.t50);
      curve.steepness = e.num("steepness", curve.steepness);
      curve.eta_max = e.num("eta_max", curve.eta_max);
      e.finish();
    }
    c.finish();
  }
  r.finish();
  validated("thermal", [&] { p.validate(); });
  t.emissions = emission_maps_from_json(emission_maps);
  return t;
}

Scenario load_scenario(const std::filesystem::path& path)
{
  Scenario sc;
  const auto base = path.parent_path();
  auto load = [&](const std::filesystem::path& p) {
    std::string text = read_file(p);
    sc.digests[p.filename().string()] = fnv1a_hex(text);
    return parse_config_text(text, p.string());
  };

  json top = load(path);
  Reader r(top, "scenario");
  check_schema(r, "ecohev.scenario");

  auto resolve = [&](const std::string& rel) { return base / rel; };
  json corridor = load(resolve(r.str("corridor")));
  json pt = load(resolve(r.str("powertrain")));
  json th = load(resolve(r.str("thermal")));
  auto ref = [&](const json& j, const std::string& key, const std::string& origin) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
      throw ConfigError(origin + ": missing required key '" + key + "'");
    return j.at(key).get<std::string>();
  };
  json engine = load(resolve(ref(pt, "engine_maps", "powertrain")));
  json emissions = load(resolve(ref(th, "emission_maps", "thermal")));

  sc.corridor = corridor_from_json(corridor);
  sc.powertrain = powertrain_from_json(pt, engine);
  sc.thermal = thermal_from_json(th, emissions);
  sc.controller = parse_controller(r.str("controller", "rule"));
  sc.planner = parse_planner(r.str("planner", "baseline"));

  if (r.has("initial"))
  {
    Reader i = r.child("initial");
    sc.initial.v0 = i.num("v0", sc.initial.v0);
    sc.initial.soc0 = i.num("soc0", sc.initial.soc0);
    sc.initial.t_cl0 = i.num("t_cl0", sc.initial.t_cl0);
    sc.initial.t_cat0 = i.num("t_cat0", sc.initial.t_cat0);
    sc.initial.entry_time = i.num("entry_time", sc.initial.entry_time);
    i.finish();
  }
  if (r.has("comfort"))
  {
    Reader c = r.child("comfort");
    sc.a_max = c.num("a_max", sc.a_max);
    sc.a_min = c.num("a_min", sc.a_min);
    c.finish();
  }
  if (r.has("eco"))
  {
    Reader e = r.child("eco");
    sc.eco.cruise_floor_fraction = e.num("cruise_floor_fraction", sc.eco.cruise_floor_fraction);
    sc.eco.slowdown_target_fraction = e.num("slowdown_target_fraction", sc.eco.slowdown_target_fraction);
    sc.eco.ramp_accel_fraction = e.num("ramp_accel_fraction", sc.eco.ramp_accel_fraction);
    e.finish();
    if (!(sc.eco.cruise_floor_fraction > 0.0 && sc.eco.cruise_floor_fraction <= 1.0) ||
        !(sc.eco.slowdown_target_fraction >= 0.0 && sc.eco.slowdown_target_fraction <= 1.0) ||
        !(sc.eco.ramp_accel_fraction > 0.0 && sc.eco.ramp_accel_fraction <= 1.0))
      throw ConfigError("scenario.eco: fractions must lie in (0, 1]");
  }
  if (r.has("dp"))
  {
    Reader d = r.child("dp");
    sc.dp.soc_min = d.num("soc_min", sc.dp.soc_min);
    sc.dp.soc_max = d.num("soc_max", sc.dp.soc_max);
    sc.dp.soc_step = d.num("soc_step", sc.dp.soc_step);
    sc.dp.p_bat_step = d.num("p_bat_step", sc.dp.p_bat_step);
    sc.dp.terminal_weight = d.num("terminal_weight", sc.dp.terminal_weight);
    if (d.has("terminal_linear_weight"))
      sc.dp.terminal_linear_weight = d.num("terminal_linear_weight");
    d.finish();
  }
  if (r.has("batch"))
  {
    Reader b = r.child("batch");
    sc.batch.n = b.integer("n", sc.batch.n);
    double seed = b.num("seed", static_cast<double>(sc.batch.seed));
    if (seed < 0.0 || seed != std::floor(seed))
      b.fail("'seed' must be a non-negative integer");
    sc.batch.seed = static_cast<std::uint64_t>(seed);
    sc.batch.v0_min_kmh = b.num("v0_min_kmh", sc.batch.v0_min_kmh);
    sc.batch.v0_max_kmh = b.num("v0_max_kmh", sc.batch.v0_max_kmh);
    sc.batch.entry_interval = b.num("entry_interval", sc.batch.entry_interval);
    b.finish();
  }
  r.finish();
  sc.validate();
  return sc;
}

}  // namespace ecohev::harness
