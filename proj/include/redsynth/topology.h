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

#ifndef REDSYNTH_TOPOLOGY_H_
#define REDSYNTH_TOPOLOGY_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace redsynth {

// One level of the hardware hierarchy. `cardinality` is the number of
// children per parent instance at this level; the interconnect described by
// `bandwidth_bps`/`latency_s` is the switch joining those children.
struct LevelSpec {
  std::string name;
  int cardinality = 1;
  double bandwidth_bps = 0.0;  // uni-directional, bytes per second
  double latency_s = 0.0;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

// An immutable tree-shaped machine model: an ordered list of levels, root
// first. The root always has cardinality 1; construction inserts one if the
// input starts wider. Safe to share across threads.
class SystemModel {
 public:
  // Validates cardinalities and bandwidths and prepends a synthetic root
  // level when levels[0].cardinality > 1.
  static absl::StatusOr<SystemModel> Create(std::vector<LevelSpec> levels);

  const std::vector<LevelSpec>& levels() const { return levels_; }
  const LevelSpec& level(int i) const { return levels_[i]; }
  int num_levels() const { return static_cast<int>(levels_.size()); }

  // Total number of devices: the product of all cardinalities.
  int device_count() const { return device_count_; }

  // Mixed-radix digits of a device index over the level cardinalities, most
  // significant (root) digit first.
  std::vector<int> CoordinateOf(int device) const;
  int DeviceOf(std::span<const int> digits) const;

  friend bool operator==(const SystemModel&, const SystemModel&) = default;

 private:
  SystemModel(std::vector<LevelSpec> levels, int device_count)
      : levels_(std::move(levels)), device_count_(device_count) {}

  std::vector<LevelSpec> levels_;
  int device_count_ = 1;
};

// Parses the JSON config format:
//   {"levels": [{"name": "node", "count": 2, "bandwidth_GBps": 8.0,
//                "latency_s": 0.0}, ...]}
// Levels are listed outermost first. `bandwidth_GBps` is decimal (1e9) and
// may be omitted only for levels with count == 1.
absl::StatusOr<SystemModel> ParseSystem(std::string_view json_text);

// Inverse of ParseSystem. ParseSystem(SerializeSystem(m)) == m.
std::string SerializeSystem(const SystemModel& system);

absl::StatusOr<SystemModel> LoadSystemFile(const std::string& path);

}  // namespace redsynth

#endif  // REDSYNTH_TOPOLOGY_H_
