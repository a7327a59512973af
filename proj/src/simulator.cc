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

#include "redsynth/simulator.h"

#include <algorithm>
#include <cassert>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace redsynth {

std::string_view ToString(CollectiveAlgo algo) {
  return algo == CollectiveAlgo::kRing ? "ring" : "tree";
}

absl::StatusOr<CollectiveAlgo> ParseAlgo(std::string_view text) {
  if (text == "ring") return CollectiveAlgo::kRing;
  if (text == "tree") return CollectiveAlgo::kTree;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown algorithm '%s' (expected ring|tree)",
                      std::string(text)));
}

int SpanLevel(std::span<const int> group, const SystemModel& system) {
  assert(group.size() >= 2);
  std::vector<int> first = system.CoordinateOf(group[0]);
  for (int level = 0; level < system.num_levels(); ++level) {
    for (size_t m = 1; m < group.size(); ++m) {
      if (system.CoordinateOf(group[m])[level] != first[level]) {
        return level;
      }
    }
  }
  return system.num_levels() - 1;
}

double CollectiveCostFactor(Collective op, int group_size,
                            CollectiveAlgo algo) {
  const double n = group_size;
  const double ring_pass = (n - 1.0) / n;
  if (algo == CollectiveAlgo::kTree) {
    switch (op) {
      case Collective::kAllReduce:
        return 2.0;
      case Collective::kReduce:
      case Collective::kBroadcast:
        return 1.0;
      case Collective::kReduceScatter:
      case Collective::kAllGather:
        return ring_pass;  // no tree variant
    }
  }
  switch (op) {
    case Collective::kAllReduce:
      return 2.0 * ring_pass;
    case Collective::kReduceScatter:
    case Collective::kAllGather:
    case Collective::kReduce:
    case Collective::kBroadcast:
      return ring_pass;
  }
  return ring_pass;
}

StepCostDetail StepCost(std::span<const GroupLoad> groups, Collective op,
                        const SystemModel& system, CollectiveAlgo algo) {
  StepCostDetail detail;
  if (groups.empty()) return detail;

  // A group's flow occupies the switch of its span level under its own
  // parent instance; concurrent flows on one switch share it evenly.
  struct Flow {
    int level;
    int parent;  // device index prefix above the span level
  };
  std::vector<Flow> flows;
  flows.reserve(groups.size());
  std::vector<int> flow_count;
  for (const GroupLoad& group : groups) {
    Flow flow;
    flow.level = SpanLevel(group.devices, system);
    std::vector<int> digits = system.CoordinateOf(group.devices.front());
    flow.parent = 0;
    for (int l = 0; l < flow.level; ++l) {
      flow.parent = flow.parent * system.level(l).cardinality + digits[l];
    }
    flows.push_back(flow);
  }
  flow_count.assign(flows.size(), 0);
  for (size_t g = 0; g < flows.size(); ++g) {
    for (const Flow& other : flows) {
      if (other.level == flows[g].level && other.parent == flows[g].parent) {
        ++flow_count[g];
      }
    }
  }

  for (size_t g = 0; g < groups.size(); ++g) {
    const GroupLoad& group = groups[g];
    const LevelSpec& level = system.level(flows[g].level);
    const double effective_bw = level.bandwidth_bps / flow_count[g];
    const double factor = CollectiveCostFactor(
        op, static_cast<int>(group.devices.size()), algo);
    const double seconds = factor * group.bytes / effective_bw +
                           level.latency_s;
    if (seconds > detail.seconds) {
      detail.seconds = seconds;
      detail.bottleneck_level = flows[g].level;
      detail.sharing = flow_count[g];
      detail.bytes_per_device = group.bytes;
    }
  }
  return detail;
}

StepCostDetail StepCost(std::span<const std::vector<int>> groups,
                        Collective op, double bytes_per_device,
                        const SystemModel& system, CollectiveAlgo algo) {
  std::vector<GroupLoad> loads;
  loads.reserve(groups.size());
  for (const std::vector<int>& group : groups) {
    loads.push_back(GroupLoad{.devices = group, .bytes = bytes_per_device});
  }
  return StepCost(loads, op, system, algo);
}

absl::StatusOr<CostReport> Simulate(const LoweredProgram& lowered,
                                    const SystemModel& system,
                                    const CostModelConfig& cfg) {
  if (cfg.payload_bytes <= 0) {
    return absl::InvalidArgumentError("payload_bytes must be positive");
  }
  const int k = system.device_count();
  StateContext ctx = InitialContext(k);
  CostReport report;

  for (size_t s = 0; s < lowered.steps.size(); ++s) {
    const CollectiveStep& step = lowered.steps[s];
    std::vector<GroupLoad> loads;
    loads.reserve(step.groups.size());

    // Bytes per device: the payload fraction follows the chunk count of the
    // busiest member, on whichever side of the step holds more (a gather
    // moves its output size, a reduce its input size).
    std::vector<int> pre_rows(step.groups.size(), 0);
    for (size_t g = 0; g < step.groups.size(); ++g) {
      for (int member : step.groups[g]) {
        pre_rows[g] =
            std::max(pre_rows[g], ctx.state(member).NonEmptyRowCount());
      }
    }
    for (const std::vector<int>& group : step.groups) {
      RuleViolation violation = ApplyCollectiveInPlace(ctx, group, step.op);
      if (violation != RuleViolation::kNone) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "refusing to simulate an invalid program (step %d: %s)", s,
            std::string(ToString(violation))));
      }
    }
    for (size_t g = 0; g < step.groups.size(); ++g) {
      int rows = pre_rows[g];
      for (int member : step.groups[g]) {
        rows = std::max(rows, ctx.state(member).NonEmptyRowCount());
      }
      loads.push_back(GroupLoad{
          .devices = step.groups[g],
          .bytes = static_cast<double>(cfg.payload_bytes) * rows / k});
    }

    report.steps.push_back(StepCost(loads, step.op, system, cfg.algo));
    report.total_seconds += report.steps.back().seconds;
  }
  return report;
}

absl::StatusOr<std::vector<RankedProgram>> RankPrograms(
    std::span<const double> seconds, int baseline_index) {
  if (seconds.empty()) {
    return absl::InvalidArgumentError("no programs to rank");
  }
  if (baseline_index < 0 ||
      baseline_index >= static_cast<int>(seconds.size())) {
    return absl::InvalidArgumentError("baseline program missing");
  }
  std::vector<RankedProgram> ranked(seconds.size());
  for (size_t i = 0; i < seconds.size(); ++i) {
    ranked[i] = RankedProgram{.index = static_cast<int>(i),
                              .seconds = seconds[i]};
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedProgram& a, const RankedProgram& b) {
                     return a.seconds < b.seconds;
                   });
  const double baseline = seconds[baseline_index];
  for (RankedProgram& entry : ranked) {
    entry.speedup = baseline / entry.seconds;
  }
  return ranked;
}

}  // namespace redsynth
