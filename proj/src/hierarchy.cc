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

#include "redsynth/hierarchy.h"

#include <algorithm>
#include <cassert>
#include <map>

#include "absl/strings/str_format.h"

namespace redsynth {

std::string_view ToString(HierarchyKind kind) {
  switch (kind) {
    case HierarchyKind::kSystem:
      return "system";
    case HierarchyKind::kColumnBased:
      return "column-based";
    case HierarchyKind::kRowBased:
      return "row-based";
    case HierarchyKind::kReductionAxis:
      return "reduction-axis";
  }
  return "?";
}

int SynthesisHierarchy::device_count() const {
  int product = 1;
  for (const SynthLevel& level : levels) product *= level.cardinality;
  return product;
}

std::vector<int> SynthesisHierarchy::cardinalities() const {
  std::vector<int> cards;
  cards.reserve(levels.size());
  for (const SynthLevel& level : levels) cards.push_back(level.cardinality);
  return cards;
}

int SynthesisHierarchy::LevelIndexOf(std::string_view label) const {
  for (int i = 0; i < num_levels(); ++i) {
    if (levels[i].label == label) return i;
  }
  return -1;
}

namespace {

bool IsReductionAxis(std::span<const int> reduction_axes, int axis) {
  return std::find(reduction_axes.begin(), reduction_axes.end(), axis) !=
         reduction_axes.end();
}

// Sequential labels for constructed hierarchies: root, L1, L2, ...
void Relabel(SynthesisHierarchy& hierarchy) {
  for (int i = 0; i < hierarchy.num_levels(); ++i) {
    hierarchy.levels[i].label =
        i == 0 ? "root" : absl::StrFormat("L%d", i);
  }
}

}  // namespace

SynthesisHierarchy BuildHierarchy(const ParallelismMatrix& matrix,
                                  std::span<const int> reduction_axes,
                                  const SystemModel& system,
                                  HierarchyKind kind) {
  const int num_axes = matrix.num_axes();
  const int num_levels = matrix.num_levels();
  SynthesisHierarchy hierarchy;
  hierarchy.kind = kind;

  switch (kind) {
    case HierarchyKind::kSystem: {
      for (int j = 0; j < num_levels; ++j) {
        SynthLevel level;
        level.label = system.level(j).name;
        level.cardinality = system.level(j).cardinality;
        for (int i = 0; i < num_axes; ++i) {
          level.atoms.push_back({.hw_level = j, .axis = i});
        }
        hierarchy.levels.push_back(std::move(level));
      }
      return hierarchy;
    }

    case HierarchyKind::kColumnBased: {
      for (int j = 0; j < num_levels; ++j) {
        for (int i = 0; i < num_axes; ++i) {
          hierarchy.levels.push_back(
              {.label = "",
               .cardinality = matrix.factor(i, j),
               .atoms = {{.hw_level = j, .axis = i}}});
        }
      }
      Relabel(hierarchy);
      return hierarchy;
    }

    case HierarchyKind::kRowBased: {
      for (int i = 0; i < num_axes; ++i) {
        for (int j = 0; j < num_levels; ++j) {
          hierarchy.levels.push_back(
              {.label = "",
               .cardinality = matrix.factor(i, j),
               .atoms = {{.hw_level = j, .axis = i}}});
        }
      }
      Relabel(hierarchy);
      return hierarchy;
    }

    case HierarchyKind::kReductionAxis: {
      hierarchy.levels.push_back(
          {.label = "root", .cardinality = 1, .atoms = {}});
      for (int j = 0; j < num_levels; ++j) {
        SynthLevel level;
        level.cardinality = 1;
        for (int axis : reduction_axes) {
          level.cardinality *= matrix.factor(axis, j);
          level.atoms.push_back({.hw_level = j, .axis = axis});
        }
        if (level.cardinality > 1) {
          hierarchy.levels.push_back(std::move(level));
        }
      }
      Relabel(hierarchy);
      return hierarchy;
    }
  }
  return hierarchy;
}

DeviceLayout::DeviceLayout(const ParallelismMatrix& matrix,
                           const SystemModel& system)
    : num_axes_(matrix.num_axes()),
      num_levels_(matrix.num_levels()),
      device_count_(system.device_count()),
      radices_(static_cast<size_t>(num_levels_) * num_axes_, 1) {
  assert(matrix.num_levels() == system.num_levels());
  for (int j = 0; j < num_levels_; ++j) {
    for (int i = 0; i < num_axes_; ++i) {
      radices_[static_cast<size_t>(j) * num_axes_ + i] = matrix.factor(i, j);
    }
  }
}

std::vector<int> DeviceLayout::CoordinateOf(int device) const {
  std::vector<int> digits(radices_.size(), 0);
  for (int cell = static_cast<int>(radices_.size()) - 1; cell >= 0; --cell) {
    digits[cell] = device % radices_[cell];
    device /= radices_[cell];
  }
  return digits;
}

int DeviceLayout::DeviceOf(std::span<const int> digits) const {
  int index = 0;
  for (size_t cell = 0; cell < radices_.size(); ++cell) {
    index = index * radices_[cell] + digits[cell];
  }
  return index;
}

std::vector<std::vector<int>> ReductionGroupPartition(
    const ParallelismMatrix& matrix, std::span<const int> reduction_axes,
    const SystemModel& system) {
  DeviceLayout layout(matrix, system);
  std::map<std::vector<int>, std::vector<int>> by_key;
  for (int device = 0; device < layout.device_count(); ++device) {
    std::vector<int> digits = layout.CoordinateOf(device);
    std::vector<int> key;
    for (int j = 0; j < layout.num_levels(); ++j) {
      for (int i = 0; i < layout.num_axes(); ++i) {
        if (!IsReductionAxis(reduction_axes, i)) {
          key.push_back(digits[static_cast<size_t>(j) * layout.num_axes() + i]);
        }
      }
    }
    by_key[std::move(key)].push_back(device);
  }
  std::vector<std::vector<int>> groups;
  groups.reserve(by_key.size());
  for (auto& [key, members] : by_key) {
    groups.push_back(std::move(members));
  }
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  return groups;
}

HierarchyEmbedding::HierarchyEmbedding(const SynthesisHierarchy& hierarchy,
                                       const ParallelismMatrix& matrix,
                                       const SystemModel& system)
    : hierarchy_device_count_(hierarchy.device_count()) {
  DeviceLayout layout(matrix, system);
  const int num_axes = layout.num_axes();
  const int num_levels = layout.num_levels();

  std::vector<bool> covered(static_cast<size_t>(num_levels) * num_axes, false);
  for (const SynthLevel& level : hierarchy.levels) {
    for (const FactorRef& atom : level.atoms) {
      covered[static_cast<size_t>(atom.hw_level) * num_axes + atom.axis] =
          true;
    }
  }
  std::vector<size_t> free_cells;
  num_assignments_ = 1;
  for (int j = 0; j < num_levels; ++j) {
    for (int i = 0; i < num_axes; ++i) {
      size_t cell = static_cast<size_t>(j) * num_axes + i;
      if (!covered[cell]) {
        free_cells.push_back(cell);
        num_assignments_ *= layout.radix(j, i);
      }
    }
  }

  physical_.assign(
      static_cast<size_t>(num_assignments_) * hierarchy_device_count_, -1);
  std::vector<int> digits(static_cast<size_t>(num_levels) * num_axes, 0);
  for (int assignment = 0; assignment < num_assignments_; ++assignment) {
    // Decode the assignment over the free cells, first cell most
    // significant.
    int rest = assignment;
    for (size_t c = free_cells.size(); c-- > 0;) {
      size_t cell = free_cells[c];
      int radix = layout.radix(static_cast<int>(cell / num_axes),
                               static_cast<int>(cell % num_axes));
      digits[cell] = radix > 0 ? rest % radix : 0;
      rest /= radix;
    }
    for (int index = 0; index < hierarchy_device_count_; ++index) {
      // Decode the hierarchy index into level digits, then each level digit
      // into its atoms' digits (first atom most significant).
      int value = index;
      for (int li = hierarchy.num_levels() - 1; li >= 0; --li) {
        const SynthLevel& level = hierarchy.levels[li];
        int level_digit = value % level.cardinality;
        value /= level.cardinality;
        for (size_t a = level.atoms.size(); a-- > 0;) {
          const FactorRef& atom = level.atoms[a];
          int radix = layout.radix(atom.hw_level, atom.axis);
          digits[static_cast<size_t>(atom.hw_level) * num_axes + atom.axis] =
              level_digit % radix;
          level_digit /= radix;
        }
      }
      physical_[static_cast<size_t>(assignment) * hierarchy_device_count_ +
                index] = layout.DeviceOf(digits);
    }
  }
}

int HierarchyEmbedding::HierarchyIndexOf(int physical_device) const {
  for (size_t i = 0; i < physical_.size(); ++i) {
    if (physical_[i] == physical_device) {
      return static_cast<int>(i % hierarchy_device_count_);
    }
  }
  return -1;
}

int HierarchyEmbedding::AssignmentOf(int physical_device) const {
  for (size_t i = 0; i < physical_.size(); ++i) {
    if (physical_[i] == physical_device) {
      return static_cast<int>(i / hierarchy_device_count_);
    }
  }
  return -1;
}

}  // namespace redsynth
