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

#include "redsynth/synthesizer.h"

#include <algorithm>
#include <chrono>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace redsynth {

std::vector<UniverseEntry> InstructionUniverse(
    const SynthesisHierarchy& hierarchy) {
  std::vector<UniverseEntry> universe;
  const int n = hierarchy.num_levels() - 1;
  std::map<std::vector<std::vector<int>>, bool> seen;
  for (int slice = 0; slice <= n; ++slice) {
    std::vector<Form> forms;
    forms.push_back(Form::InsideGroup());
    for (int ancestor = 0; ancestor < slice; ++ancestor) {
      forms.push_back(Form::Parallel(ancestor));
    }
    for (int ancestor = 0; ancestor < slice; ++ancestor) {
      forms.push_back(Form::Master(ancestor));
    }
    for (const Form& form : forms) {
      auto groups = DeriveGroups(hierarchy, slice, form);
      if (!groups.ok()) continue;  // no-op pattern
      auto [it, inserted] = seen.emplace(std::move(*groups), true);
      if (!inserted) continue;  // same group set as an earlier (slice, form)
      for (Collective op : kAllCollectives) {
        universe.push_back(UniverseEntry{
            .instruction = {.slice = slice, .form = form, .op = op},
            .groups = it->first});
      }
    }
  }
  return universe;
}

namespace {

// A prefix of the search tree. Parents stay alive in the arena so a path's
// instructions and contexts can be recovered by walking up.
struct SearchNode {
  StateContext ctx;
  int parent = -1;
  int universe_index = -1;
};

std::vector<int> PathInstructions(const std::vector<SearchNode>& arena,
                                  int node, int universe_index) {
  std::vector<int> path{universe_index};
  while (node >= 0 && arena[node].universe_index >= 0) {
    path.push_back(arena[node].universe_index);
    node = arena[node].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool PathRepeatsContext(const std::vector<SearchNode>& arena, int node,
                        const StateContext& ctx) {
  while (node >= 0) {
    if (arena[node].ctx == ctx) return true;
    node = arena[node].parent;
  }
  return false;
}

}  // namespace

absl::StatusOr<SynthesisResult> Synthesize(const ParallelismMatrix& matrix,
                                           std::span<const int> reduction_axes,
                                           const SystemModel& system,
                                           const SynthesisConfig& cfg) {
  if (cfg.size_limit < 1) {
    return absl::InvalidArgumentError("size limit must be >= 1");
  }
  const auto start_time = std::chrono::steady_clock::now();

  SynthesisResult result;
  result.hierarchy = BuildHierarchy(matrix, reduction_axes, system,
                                    HierarchyKind::kReductionAxis);
  const int k = result.hierarchy.device_count();
  if (k == 1) {
    // Nothing to reduce: a one-device group is already in its goal state.
    return result;
  }

  const std::vector<UniverseEntry> universe =
      InstructionUniverse(result.hierarchy);
  HierarchyEmbedding embedding(result.hierarchy, matrix, system);

  // In the hierarchy's own space all devices reduce together.
  std::vector<std::vector<int>> whole(1);
  whole[0].resize(k);
  for (int d = 0; d < k; ++d) whole[0][d] = d;
  const StateContext goal = GoalContext(k, whole);

  // The goal over the physical device set, for verifying lowerings.
  const std::vector<std::vector<int>> partition =
      ReductionGroupPartition(matrix, reduction_axes, system);
  const StateContext physical_goal =
      GoalContext(system.device_count(), partition);

  std::vector<SearchNode> arena;
  arena.push_back(SearchNode{.ctx = InitialContext(k)});
  std::vector<int> frontier{0};
  std::vector<std::vector<int>> emitted;  // as universe-index sequences

  for (int length = 1;
       length <= cfg.size_limit && !frontier.empty(); ++length) {
    std::vector<int> next;
    for (int node : frontier) {
      for (size_t ui = 0; ui < universe.size(); ++ui) {
        const UniverseEntry& entry = universe[ui];
        StateContext ctx = arena[node].ctx;
        RuleViolation violation = RuleViolation::kNone;
        for (const std::vector<int>& group : entry.groups) {
          violation = ApplyCollectiveInPlace(ctx, group, entry.instruction.op);
          if (violation != RuleViolation::kNone) break;
        }
        ++result.stats.explored;
        if (violation != RuleViolation::kNone) {
          ++result.stats.pruned_semantic;
          continue;
        }
        if (ctx == goal) {
          emitted.push_back(
              PathInstructions(arena, node, static_cast<int>(ui)));
          continue;  // minimal: goal prefixes are not extended
        }
        if (cfg.dedupe_states && PathRepeatsContext(arena, node, ctx)) {
          ++result.stats.pruned_repeat;
          continue;
        }
        arena.push_back(SearchNode{.ctx = std::move(ctx),
                                   .parent = node,
                                   .universe_index = static_cast<int>(ui)});
        next.push_back(static_cast<int>(arena.size()) - 1);
      }
    }
    frontier = std::move(next);
  }

  result.programs.reserve(emitted.size());
  for (const std::vector<int>& indices : emitted) {
    SynthesizedProgram entry;
    for (int ui : indices) {
      entry.program.instructions.push_back(universe[ui].instruction);
    }
    auto lowered = Lower(entry.program, result.hierarchy, embedding);
    if (!lowered.ok()) return lowered.status();
    entry.lowered = *std::move(lowered);
    auto final_ctx = RunLowered(entry.lowered, system.device_count());
    if (!final_ctx.ok() || !(*final_ctx == physical_goal)) {
      return absl::InternalError(absl::StrFormat(
          "synthesized program '%s' does not reach the goal when lowered",
          PrettyPrint(entry.program, result.hierarchy)));
    }
    result.programs.push_back(std::move(entry));
  }

  result.stats.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_time)
          .count();
  return result;
}

bool ValidityPrefilter(const SynthesisHierarchy& hierarchy,
                       const ReductionInstruction& instruction,
                       const ParallelismMatrix& matrix,
                       std::span<const int> reduction_axes) {
  // The factor conditions reason about contribution merging; AllGather and
  // Broadcast move rows without merging them, and with partially emptied
  // devices they can cross non-reduction factors inside goal-reaching
  // programs, so they are never filtered.
  if (instruction.op == Collective::kAllGather ||
      instruction.op == Collective::kBroadcast) {
    return true;
  }
  const int n = hierarchy.num_levels() - 1;
  int first = 0;
  int last = n;
  switch (instruction.form.kind) {
    case Form::kInsideGroup:
      first = instruction.slice + 1;
      last = n;
      break;
    case Form::kParallel:
      first = instruction.form.ancestor + 1;
      last = instruction.slice;
      break;
    case Form::kMaster:
      first = instruction.form.ancestor + 1;
      last = n;
      break;
  }
  for (int t = first; t <= last; ++t) {
    const SynthLevel& level = hierarchy.levels[t];
    if (level.cardinality == 1) continue;
    for (const FactorRef& atom : level.atoms) {
      if (matrix.factor(atom.axis, atom.hw_level) == 1) continue;
      if (std::find(reduction_axes.begin(), reduction_axes.end(), atom.axis) ==
          reduction_axes.end()) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace redsynth
