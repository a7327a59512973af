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

#ifndef REDSYNTH_PLACEMENT_H_
#define REDSYNTH_PLACEMENT_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "redsynth/topology.h"

namespace redsynth {

// The parallelism request: axis sizes plus which axes must be reduced.
struct ParallelismSpec {
  std::vector<int> axes;            // p_0..p_m, each >= 1
  std::vector<int> reduction_axes;  // sorted, unique, nonempty
};

// Checks the ParallelismSpec invariants against a system (axis product must
// equal the device count, reduction axes must be valid indices).
absl::Status ValidateSpec(const ParallelismSpec& spec,
                          const SystemModel& system);

// A grid of positive factors assigning each axis's size multiplicatively
// across the hierarchy levels: row products are the axis sizes, column
// products are the level cardinalities.
class ParallelismMatrix {
 public:
  ParallelismMatrix(int num_axes, int num_levels)
      : num_axes_(num_axes),
        num_levels_(num_levels),
        factors_(static_cast<size_t>(num_axes) * num_levels, 1) {}

  static ParallelismMatrix FromRows(
      const std::vector<std::vector<int>>& rows);

  int num_axes() const { return num_axes_; }
  int num_levels() const { return num_levels_; }

  int factor(int axis, int level) const {
    return factors_[static_cast<size_t>(axis) * num_levels_ + level];
  }
  void set_factor(int axis, int level, int value) {
    factors_[static_cast<size_t>(axis) * num_levels_ + level] = value;
  }

  // Row `axis` of the grid; its product is the axis size.
  std::vector<int> AxisRow(int axis) const;

  // Row-major flattened factors; also the sort key for deterministic
  // enumeration order.
  const std::vector<int>& flat() const { return factors_; }

  std::string ToString() const;  // e.g. "[[1,2,2,1],[1,1,1,4]]"

  friend bool operator==(const ParallelismMatrix&,
                         const ParallelismMatrix&) = default;

 private:
  int num_axes_;
  int num_levels_;
  std::vector<int> factors_;
};

// All factor grids satisfying the row and column product constraints, in
// row-major lexicographic order, without duplicates.
absl::StatusOr<std::vector<ParallelismMatrix>> EnumerateMatrices(
    const SystemModel& system, const ParallelismSpec& spec);

}  // namespace redsynth

#endif  // REDSYNTH_PLACEMENT_H_
