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

#ifndef REDSYNTH_DSL_H_
#define REDSYNTH_DSL_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "redsynth/hierarchy.h"
#include "redsynth/semantics.h"

namespace redsynth {

// Grouping pattern of a reduction instruction. Parallel and Master carry a
// strict ancestor of the sliced level.
struct Form {
  enum Kind { kInsideGroup, kParallel, kMaster };

  Kind kind = kInsideGroup;
  int ancestor = -1;  // level index; meaningful for kParallel/kMaster

  static Form InsideGroup() { return {kInsideGroup, -1}; }
  static Form Parallel(int ancestor) { return {kParallel, ancestor}; }
  static Form Master(int ancestor) { return {kMaster, ancestor}; }

  friend bool operator==(const Form&, const Form&) = default;
};

struct ReductionInstruction {
  int slice = 0;  // level index into the synthesis hierarchy
  Form form;
  Collective op = Collective::kAllReduce;

  friend bool operator==(const ReductionInstruction&,
                         const ReductionInstruction&) = default;
};

// An ordered instruction list, written against one synthesis hierarchy
// (passed alongside wherever it is needed).
struct Program {
  std::vector<ReductionInstruction> instructions;

  friend bool operator==(const Program&, const Program&) = default;
};

// The device groups selected by (slice, form) over the hierarchy's own
// device space, per the hierarchical communication patterns:
//   InsideGroup:  one group per prefix a_0..a_i, members share the prefix.
//   Parallel(e):  one group per (a_0..a_j, a_{i+1}..a_n), members vary the
//                 digits in between.
//   Master(e):    per prefix, the first Parallel group: the one whose
//                 suffix digits are all zero.
// Groups are ordered by smallest member, members ascending. Instructions
// whose groups would all be singletons are rejected as no-ops.
absl::StatusOr<std::vector<std::vector<int>>> DeriveGroups(
    const SynthesisHierarchy& hierarchy, int slice, Form form);

// A program realized over physical devices.
struct LoweredProgram {
  std::vector<CollectiveStep> steps;

  friend bool operator==(const LoweredProgram&, const LoweredProgram&) =
      default;
};

// Instantiates each instruction's group pattern once per assignment of the
// non-reduction digits. `program` must be written against the reduction-axis
// hierarchy of (matrix, reduction_axes).
absl::StatusOr<LoweredProgram> Lower(const Program& program,
                                     const ParallelismMatrix& matrix,
                                     std::span<const int> reduction_axes,
                                     const SystemModel& system);

// Variant reusing a prebuilt hierarchy + embedding (hot path).
absl::StatusOr<LoweredProgram> Lower(const Program& program,
                                     const SynthesisHierarchy& hierarchy,
                                     const HierarchyEmbedding& embedding);

// Where and why a lowered program failed.
struct StepFailure {
  int step = -1;
  Collective op = Collective::kAllReduce;
  RuleViolation violation = RuleViolation::kNone;
  std::vector<int> group;

  std::string Describe() const;
};

// Folds the collective semantics over the steps from InitialContext(k).
// Groups within a step are disjoint, so their order does not matter. On
// failure returns an error naming the step; `failure`, when non-null, gets
// the structured details.
absl::StatusOr<StateContext> RunLowered(const LoweredProgram& lowered, int k,
                                        StepFailure* failure = nullptr);

// Textual form, e.g.
//   "Slice(L1) InsideGroup Reduce; Slice(L1) Master(root) AllReduce"
// Parseable back with ParseProgram against the same hierarchy.
std::string PrettyPrint(const Program& program,
                        const SynthesisHierarchy& hierarchy);
std::string PrettyPrint(const ReductionInstruction& instruction,
                        const SynthesisHierarchy& hierarchy);

absl::StatusOr<Program> ParseProgram(std::string_view text,
                                     const SynthesisHierarchy& hierarchy);

}  // namespace redsynth

#endif  // REDSYNTH_DSL_H_
