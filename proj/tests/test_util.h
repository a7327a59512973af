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

#ifndef REDSYNTH_TESTS_TEST_UTIL_H_
#define REDSYNTH_TESTS_TEST_UTIL_H_

#include <set>
#include <string>
#include <vector>

#include "redsynth/dsl.h"
#include "redsynth/hierarchy.h"
#include "redsynth/placement.h"
#include "redsynth/semantics.h"
#include "redsynth/topology.h"

namespace redsynth::testing {

// A system with the given cardinalities (root included or not), generated
// level names, and 1 GB/s everywhere an interconnect is needed.
SystemModel MakeSystem(const std::vector<int>& cardinalities);

// Naive reference for matrix enumeration: every grid of per-column divisor
// tuples, filtered by the row and column product constraints. No pruning, no
// ordering guarantees.
std::vector<ParallelismMatrix> BruteForceMatrices(const SystemModel& system,
                                                  const ParallelismSpec& spec);

// Literal transcription of each collective's premises using plain integer
// sets, independent of the bitset implementation under test.
bool PremisesHold(const StateContext& ctx, const std::vector<int>& group,
                  Collective op);

// Canonical text key of a lowered program (groups and member order
// included), for set comparisons.
std::string LoweredKey(const LoweredProgram& lowered);

// A group pattern over physical devices: one instruction's lowered groups,
// members sorted ascending, groups ordered by first member. `lemma_clean`
// records whether some (slice, form) yielding this pattern keeps every
// non-trivial factor it spans or repeats across on a reduction axis.
struct PhysicalPattern {
  std::vector<std::vector<int>> groups;
  bool lemma_clean = false;
};

std::vector<PhysicalPattern> PhysicalPatterns(
    const SynthesisHierarchy& hierarchy, const HierarchyEmbedding& embedding,
    const ParallelismMatrix& matrix,
    const std::vector<int>& reduction_axes);

// Canonical text key of one step's group set.
std::string GroupsKey(const std::vector<std::vector<int>>& groups);

// Every minimal valid lowered program over physical devices of length <=
// max_len whose steps are drawn from the hierarchy's patterns and that ends
// in the reduction-partition goal. Plain breadth-first search.
// `lemma_fragment_only` restricts the steps to lemma-clean patterns.
std::vector<LoweredProgram> ValidLoweredPrograms(
    const SynthesisHierarchy& hierarchy, const ParallelismMatrix& matrix,
    const std::vector<int>& reduction_axes, const SystemModel& system,
    int max_len, bool lemma_fragment_only = false);

// All hardware hierarchies (as cardinality lists, root excluded) whose
// device product is in [2, max_devices], with every level in [2,
// max_devices] and at most max_depth levels.
std::vector<std::vector<int>> AllSystemShapes(int max_devices, int max_depth);

// Axis splits used by the exhaustive harnesses: the single axis [K] plus
// every ordered pair (a, b), a*b == K, a,b >= 2.
std::vector<std::vector<int>> AxisSplits(int device_count);

}  // namespace redsynth::testing

#endif  // REDSYNTH_TESTS_TEST_UTIL_H_
