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

#ifndef REDSYNTH_SYNTHESIZER_H_
#define REDSYNTH_SYNTHESIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "redsynth/dsl.h"
#include "redsynth/hierarchy.h"
#include "redsynth/placement.h"
#include "redsynth/semantics.h"
#include "redsynth/topology.h"

namespace redsynth {

struct SynthesisConfig {
  int size_limit = 5;
  bool dedupe_states = true;
};

// One instruction of the search universe together with its precomputed
// group pattern over the hierarchy's device space.
struct UniverseEntry {
  ReductionInstruction instruction;
  std::vector<std::vector<int>> groups;
};

// All instructions with valid ancestor constraints and non-trivial groups,
// in deterministic order: slice ascending; InsideGroup, then Parallel by
// ancestor ascending, then Master by ancestor ascending; collectives in
// grammar order. Instructions whose group sets coincide are collapsed into
// the first one.
std::vector<UniverseEntry> InstructionUniverse(
    const SynthesisHierarchy& hierarchy);

struct SynthesizedProgram {
  Program program;
  LoweredProgram lowered;
};

struct SynthesisStats {
  int64_t explored = 0;         // instruction applications attempted
  int64_t pruned_semantic = 0;  // prefixes cut by a rule violation
  int64_t pruned_repeat = 0;    // prefixes cut by a repeated state
  double elapsed_s = 0.0;
};

struct SynthesisResult {
  SynthesisHierarchy hierarchy;
  std::vector<SynthesizedProgram> programs;  // by length, then universe order
  SynthesisStats stats;
};

// Enumerates every semantically valid reduction program over the
// reduction-axis hierarchy up to cfg.size_limit instructions. Programs are
// minimal (no emitted program extends another) and each one's lowering is
// verified to reach the goal state over the physical device set.
absl::StatusOr<SynthesisResult> Synthesize(const ParallelismMatrix& matrix,
                                           std::span<const int> reduction_axes,
                                           const SystemModel& system,
                                           const SynthesisConfig& cfg = {});

// Necessary condition for a contribution-merging instruction (AllReduce,
// ReduceScatter, Reduce) to take part in any goal-reaching program: every
// factor its groups are partitioned over, or silently repeated across for a
// Master, must be 1 or belong to a reduction axis. AllGather and Broadcast
// move rows without merging them and always pass. Returns false only when
// the condition is violated.
bool ValidityPrefilter(const SynthesisHierarchy& hierarchy,
                       const ReductionInstruction& instruction,
                       const ParallelismMatrix& matrix,
                       std::span<const int> reduction_axes);

}  // namespace redsynth

#endif  // REDSYNTH_SYNTHESIZER_H_
