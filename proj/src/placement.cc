/* Copyright 2026 The RedSynth Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "redsynth/placement.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace redsynth {

absl::Status ValidateSpec(const ParallelismSpec& spec,
                          const SystemModel& system) {
  if (spec.axes.empty()) {
    return absl::InvalidArgumentError("parallelism axes must be nonempty");
  }
  int64_t product = 1;
  for (int axis : spec.axes) {
    if (axis < 1) {
      return absl::InvalidArgumentError("axis sizes must be >= 1");
    }
    product *= axis;
  }
  if (product != system.device_count()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "product of axes (%d) must equal the device count (%d)", product,
        system.device_count()));
  }
  if (spec.reduction_axes.empty()) {
    return absl::InvalidArgumentError("reduction axes must be nonempty");
  }
  for (size_t i = 0; i < spec.reduction_axes.size(); ++i) {
    int axis = spec.reduction_axes[i];
    if (axis < 0 || axis >= static_cast<int>(spec.axes.size())) {
      return absl::InvalidArgumentError(
          absl::StrFormat("reduction axis %d out of range", axis));
    }
    if (i > 0 && spec.reduction_axes[i - 1] >= axis) {
      return absl::InvalidArgumentError(
          "reduction axes must be sorted and unique");
    }
  }
  return absl::OkStatus();
}

ParallelismMatrix ParallelismMatrix::FromRows(
    const std::vector<std::vector<int>>& rows) {
  ParallelismMatrix matrix(static_cast<int>(rows.size()),
                           static_cast<int>(rows.front().size()));
  for (int i = 0; i < matrix.num_axes(); ++i) {
    for (int j = 0; j < matrix.num_levels(); ++j) {
      matrix.set_factor(i, j, rows[i][j]);
    }
  }
  return matrix;
}

std::vector<int> ParallelismMatrix::AxisRow(int axis) const {
  return std::vector<int>(
      factors_.begin() + static_cast<size_t>(axis) * num_levels_,
      factors_.begin() + static_cast<size_t>(axis + 1) * num_levels_);
}

std::string ParallelismMatrix::ToString() const {
  std::ostringstream out;
  out << "[";
  for (int i = 0; i < num_axes_; ++i) {
    out << (i == 0 ? "[" : ",[");
    for (int j = 0; j < num_levels_; ++j) {
      if (j > 0) out << ",";
      out << factor(i, j);
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

namespace {

// Enumerates, in ascending lexicographic order, the assignments of one
// column: factors (f_0..f_m) with product `target` where the running row
// product still divides the row's axis size.
void FillColumn(int axis, int target, const std::vector<int>& axes,
                std::vector<int64_t>& row_products, std::vector<int>& column,
                const std::function<void()>& done) {
  const int num_axes = static_cast<int>(axes.size());
  if (axis == num_axes) {
    if (target == 1) done();
    return;
  }
  for (int f = 1; f <= target; ++f) {
    if (target % f != 0) continue;
    int64_t grown = row_products[axis] * f;
    if (axes[axis] % grown != 0) continue;
    row_products[axis] = grown;
    column[axis] = f;
    FillColumn(axis + 1, target / f, axes, row_products, column, done);
    row_products[axis] /= f;
  }
}

void FillLevels(int level, const SystemModel& system,
                const std::vector<int>& axes,
                std::vector<int64_t>& row_products, ParallelismMatrix& grid,
                std::vector<ParallelismMatrix>& out) {
  const int num_axes = static_cast<int>(axes.size());
  if (level == system.num_levels()) {
    for (int i = 0; i < num_axes; ++i) {
      if (row_products[i] != axes[i]) return;
    }
    out.push_back(grid);
    return;
  }
  std::vector<int> column(num_axes, 1);
  FillColumn(0, system.level(level).cardinality, axes, row_products, column,
             [&] {
               for (int i = 0; i < num_axes; ++i) {
                 grid.set_factor(i, level, column[i]);
               }
               FillLevels(level + 1, system, axes, row_products, grid, out);
             });
}

}  // namespace

absl::StatusOr<std::vector<ParallelismMatrix>> EnumerateMatrices(
    const SystemModel& system, const ParallelismSpec& spec) {
  if (absl::Status status = ValidateSpec(spec, system); !status.ok()) {
    return status;
  }
  std::vector<ParallelismMatrix> out;
  ParallelismMatrix grid(static_cast<int>(spec.axes.size()),
                         system.num_levels());
  std::vector<int64_t> row_products(spec.axes.size(), 1);
  FillLevels(0, system, spec.axes, row_products, grid, out);
  std::sort(out.begin(), out.end(),
            [](const ParallelismMatrix& a, const ParallelismMatrix& b) {
              return a.flat() < b.flat();
            });
  return out;
}

}  // namespace redsynth
