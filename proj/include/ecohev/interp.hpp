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
#include <vector>

namespace ecohev
{

/**
 * Piecewise-linear lookup y(x) over strictly increasing knots. Queries outside
 * [x.front(), x.back()] throw OutOfEnvelope.
 */
class LinearTable
{
public:
  LinearTable() = default;
  LinearTable(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/**
 * Bilinear map z(row, col) over a rectangular grid. Values are stored row-major,
 * values[i * cols + j] = z(row_knots[i], col_knots[j]).
 */
class GridMap2D
{
public:
  GridMap2D() = default;
  GridMap2D(std::vector<double> row_knots, std::vector<double> col_knots, std::vector<double> values);

  double operator()(double row, double col) const;
  bool contains(double row, double col) const;

  const std::vector<double>& row_knots() const { return rows_; }
  const std::vector<double>& col_knots() const { return cols_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_.size() + j]; }
  bool empty() const { return values_.empty(); }

private:
  std::vector<double> rows_;
  std::vector<double> cols_;
  std::vector<double> values_;
};

// Index i of the bracketing interval [knots[i], knots[i+1]] for x inside the span.
std::size_t bracket(std::span<const double> knots, double x);

bool strictly_increasing(std::span<const double> v);

}  // namespace ecohev
