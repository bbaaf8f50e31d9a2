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
#include "ecohev/interp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ecohev/errors.hpp"

namespace ecohev
{

bool strictly_increasing(std::span<const double> v)
{
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

std::size_t bracket(std::span<const double> knots, double x)
{
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(knots.begin(), it));
  if (i == 0)
    return 0;
  return std::min(i - 1, knots.size() - 2);
}

LinearTable::LinearTable(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
{
  if (x_.size() < 2 || x_.size() != y_.size())
    throw std::invalid_argument("LinearTable needs at least two knots and matching value count");
  if (!strictly_increasing(x_))
    throw std::invalid_argument("LinearTable knots must be strictly increasing");
}

double LinearTable::operator()(double x) const
{
  if (!(x >= x_.front() && x <= x_.back()))
    throw OutOfEnvelope("table query " + std::to_string(x) + " outside [" + std::to_string(x_.front()) + ", " +
                        std::to_string(x_.back()) + "]");
  std::size_t i = bracket(x_, x);
  if (x == x_[i])
    return y_[i];
  if (x == x_[i + 1])
    return y_[i + 1];
  double w = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return y_[i] + w * (y_[i + 1] - y_[i]);
}

GridMap2D::GridMap2D(std::vector<double> row_knots, std::vector<double> col_knots, std::vector<double> values)
  : rows_(std::move(row_knots)), cols_(std::move(col_knots)), values_(std::move(values))
{
  if (rows_.size() < 2 || cols_.size() < 2)
    throw std::invalid_argument("GridMap2D needs at least two knots per axis");
  if (values_.size() != rows_.size() * cols_.size())
    throw std::invalid_argument("GridMap2D value count does not match the grid");
  if (!strictly_increasing(rows_) || !strictly_increasing(cols_))
    throw std::invalid_argument("GridMap2D knots must be strictly increasing");
}

bool GridMap2D::contains(double row, double col) const
{
  return row >= rows_.front() && row <= rows_.back() && col >= cols_.front() && col <= cols_.back();
}

double GridMap2D::operator()(double row, double col) const
{
  if (!contains(row, col))
    throw OutOfEnvelope("map query (" + std::to_string(row) + ", " + std::to_string(col) + ") outside the grid hull");
  std::size_t i = bracket(rows_, row);
  std::size_t j = bracket(cols_, col);
  double u = (row - rows_[i]) / (rows_[i + 1] - rows_[i]);
  double w = (col - cols_[j]) / (cols_[j + 1] - cols_[j]);
  // Exact node values without rounding from the blend.
  if (u == 0.0 && w == 0.0)
    return at(i, j);
  double z00 = at(i, j), z01 = at(i, j + 1), z10 = at(i + 1, j), z11 = at(i + 1, j + 1);
  return (1 - u) * ((1 - w) * z00 + w * z01) + u * ((1 - w) * z10 + w * z11);
}

}  // namespace ecohev
