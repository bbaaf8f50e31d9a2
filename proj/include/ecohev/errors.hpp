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

#include <stdexcept>
#include <string>

namespace ecohev
{

// Base of every domain error raised by the library. Precondition violations
// are reported with std::invalid_argument instead.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Two traffic states share a density; the wave between them is undefined.
class EqualDensity : public Error
{
public:
  using Error::Error;
};

// No green window could be found within the configured number of cycles.
class NoWindowInHorizon : public Error
{
public:
  using Error::Error;
};

// Query outside a map or table hull, or beyond the engine power limit.
class OutOfEnvelope : public Error
{
public:
  using Error::Error;
};

// Demand exceeds what engine and battery can deliver together.
class InfeasibleDemand : public Error
{
public:
  using Error::Error;
};

// The DP forward pass reached a state with no finite-cost control.
class NoFeasiblePolicy : public Error
{
public:
  using Error::Error;
};

// Malformed, missing or inconsistent configuration input.
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace ecohev
