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

#ifndef REDSYNTH_HIERARCHY_H_
#define REDSYNTH_HIERARCHY_H_

#include <span>
#include <string>
#include <vector>

#include "redsynth/placement.h"
#include "redsynth/topology.h"

namespace redsynth {

// Which level structure reduction programs are written against.
enum class HierarchyKind {
  kSystem,        // the hardware cardinalities as-is
  kColumnBased,   // matrix factors level-major (expands the hardware levels)
  kRowBased,      // matrix factors axis-major (expands the parallelism axes)
  kReductionAxis  // reduction-axis factors only, collapsed per hardware level
};

std::string_view ToString(HierarchyKind kind);

// One matrix cell x_{axis,level}.
struct FactorRef {
  int hw_level = 0;
  int axis = 0;

  friend bool operator==(const FactorRef&, const FactorRef&) = default;
};

struct SynthLevel {
  std::string label;
  int cardinality = 1;
  // The matrix cells whose factors this level multiplies, most significant
  // first. Empty for a synthetic root.
  std::vector<FactorRef> atoms;

  friend bool operator==(const SynthLevel&, const SynthLevel&) = default;
};

// A synthesis hierarchy: an ordered list of levels, root (cardinality 1)
// first. Kinds (a)-(c) cover the full device set; kind (d) covers only the
// reduction axes and relies on lowering to reach physical devices.
struct SynthesisHierarchy {
  HierarchyKind kind = HierarchyKind::kSystem;
  std::vector<SynthLevel> levels;

  int num_levels() const { return static_cast<int>(levels.size()); }
  int device_count() const;
  std::vector<int> cardinalities() const;
  // Index of the level with this label, or -1.
  int LevelIndexOf(std::string_view label) const;

  friend bool operator==(const SynthesisHierarchy&,
                         const SynthesisHierarchy&) = default;
};

// Builds the synthesis hierarchy of the given kind. For kReductionAxis,
// factors of the same hardware level are multiplied together (first
// reduction axis most significant) and factor-1 levels are dropped; a root
// level is always present.
SynthesisHierarchy BuildHierarchy(const ParallelismMatrix& matrix,
                                  std::span<const int> reduction_axes,
                                  const SystemModel& system,
                                  HierarchyKind kind);

// The physical placement induced by a parallelism matrix: the device index
// is the mixed-radix value of the per-cell digits read level-major, axes
// ascending within a level (axis 0 outermost).
class DeviceLayout {
 public:
  DeviceLayout(const ParallelismMatrix& matrix, const SystemModel& system);

  int device_count() const { return device_count_; }
  int num_axes() const { return num_axes_; }
  int num_levels() const { return num_levels_; }

  int radix(int hw_level, int axis) const {
    return radices_[static_cast<size_t>(hw_level) * num_axes_ + axis];
  }

  // Digits per matrix cell, level-major then axis-ascending.
  std::vector<int> CoordinateOf(int device) const;
  int DeviceOf(std::span<const int> digits) const;

 private:
  int num_axes_;
  int num_levels_;
  int device_count_;
  std::vector<int> radices_;
};

// Devices grouped by equality of all non-reduction-axis digits: the sets
// that must be reduced together. Groups are ordered by smallest member,
// members ascending.
std::vector<std::vector<int>> ReductionGroupPartition(
    const ParallelismMatrix& matrix, std::span<const int> reduction_axes,
    const SystemModel& system);

// Maps a hierarchy's own device space onto physical devices. A hierarchy
// index fixes the digits of the cells the hierarchy covers; an assignment
// index fixes every remaining cell. Kinds (a)-(c) cover everything, so they
// have exactly one assignment; kind (d) has one per combination of
// non-reduction digits.
class HierarchyEmbedding {
 public:
  HierarchyEmbedding(const SynthesisHierarchy& hierarchy,
                     const ParallelismMatrix& matrix,
                     const SystemModel& system);

  int hierarchy_device_count() const { return hierarchy_device_count_; }
  int num_assignments() const { return num_assignments_; }

  int PhysicalOf(int hierarchy_index, int assignment) const {
    return physical_[static_cast<size_t>(assignment) *
                         hierarchy_device_count_ +
                     hierarchy_index];
  }

  // Inverse lookup over the full table; -1 if the device is not reachable
  // (never the case for valid inputs).
  int HierarchyIndexOf(int physical_device) const;
  int AssignmentOf(int physical_device) const;

 private:
  int hierarchy_device_count_;
  int num_assignments_;
  std::vector<int> physical_;  // [assignment][hierarchy_index]
};

}  // namespace redsynth

#endif  // REDSYNTH_HIERARCHY_H_
