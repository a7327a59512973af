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

#ifndef REDSYNTH_SIMULATOR_H_
#define REDSYNTH_SIMULATOR_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "redsynth/dsl.h"
#include "redsynth/semantics.h"
#include "redsynth/topology.h"

namespace redsynth {

enum class CollectiveAlgo { kRing, kTree };

std::string_view ToString(CollectiveAlgo algo);
absl::StatusOr<CollectiveAlgo> ParseAlgo(std::string_view text);

struct CostModelConfig {
  CollectiveAlgo algo = CollectiveAlgo::kRing;
  int64_t payload_bytes = 0;  // per device at program start
};

// The topmost hierarchy level at which the group members' hardware
// coordinates differ; the group's traffic crosses that level's interconnect.
int SpanLevel(std::span<const int> group, const SystemModel& system);

// Transfer-time factor of one collective over an n-device group: the cost is
// factor * bytes / effective_bandwidth. Ring costs are the standard pipelined
// models; tree AllReduce is a reduce+broadcast pass, and tree has no
// reduce-scatter/all-gather variants so those fall back to ring.
double CollectiveCostFactor(Collective op, int group_size,
                            CollectiveAlgo algo);

struct GroupLoad {
  std::vector<int> devices;
  double bytes = 0.0;  // payload per device for this step
};

struct StepCostDetail {
  double seconds = 0.0;
  int bottleneck_level = -1;  // span level of the slowest group
  int sharing = 1;            // flows over that group's switch
  double bytes_per_device = 0.0;
};

// Cost of one step: groups run concurrently, each bottlenecked by its span
// level's interconnect shared evenly among the step's groups that cross the
// same switch. The step takes as long as its slowest group.
StepCostDetail StepCost(std::span<const GroupLoad> groups, Collective op,
                        const SystemModel& system, CollectiveAlgo algo);

// Uniform-payload convenience used when no state tracking is wanted.
StepCostDetail StepCost(std::span<const std::vector<int>> groups,
                        Collective op, double bytes_per_device,
                        const SystemModel& system, CollectiveAlgo algo);

struct CostReport {
  double total_seconds = 0.0;
  std::vector<StepCostDetail> steps;
};

// Predicts end-to-end time of a valid lowered program. Per-device payload is
// tracked through the state semantics, so the data shrink from a
// ReduceScatter is reflected in later steps. Refuses invalid programs.
absl::StatusOr<CostReport> Simulate(const LoweredProgram& lowered,
                                    const SystemModel& system,
                                    const CostModelConfig& cfg);

struct RankedProgram {
  int index = 0;  // position in the input sequence
  double seconds = 0.0;
  double speedup = 1.0;  // baseline seconds / this program's seconds
};

// Sorts programs by simulated time (stable on ties: earlier input first) and
// annotates the speedup against the baseline entry.
absl::StatusOr<std::vector<RankedProgram>> RankPrograms(
    std::span<const double> seconds, int baseline_index);

}  // namespace redsynth

#endif  // REDSYNTH_SIMULATOR_H_
