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

#include "redsynth/dsl.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace redsynth {

absl::StatusOr<std::vector<std::vector<int>>> DeriveGroups(
    const SynthesisHierarchy& hierarchy, int slice, Form form) {
  const int n = hierarchy.num_levels() - 1;
  if (slice < 0 || slice > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("slice level %d out of range", slice));
  }
  if (form.kind != Form::kInsideGroup &&
      (form.ancestor < 0 || form.ancestor >= slice)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "form level %d must be a strict ancestor of slice %d", form.ancestor,
        slice));
  }

  const std::vector<int> cards = hierarchy.cardinalities();
  // tail[t] = number of devices under one level-t instance (product of the
  // cardinalities of the strictly deeper levels).
  std::vector<int> tail(n + 2, 1);
  for (int t = n - 1; t >= 0; --t) tail[t] = tail[t + 1] * cards[t + 1];

  std::vector<std::vector<int>> groups;
  const int i = slice;

  if (form.kind == Form::kInsideGroup) {
    const int group_size = tail[i];
    if (group_size <= 1) {
      return absl::FailedPreconditionError(
          "instruction groups only single devices");
    }
    int prefix_count = 1;
    for (int t = 0; t <= i; ++t) prefix_count *= cards[t];
    groups.reserve(prefix_count);
    for (int p = 0; p < prefix_count; ++p) {
      std::vector<int> group(group_size);
      for (int member = 0; member < group_size; ++member) {
        group[member] = p * group_size + member;
      }
      groups.push_back(std::move(group));
    }
    return groups;
  }

  const int j = form.ancestor;
  int group_size = 1;
  for (int t = j + 1; t <= i; ++t) group_size *= cards[t];
  if (group_size <= 1) {
    return absl::FailedPreconditionError(
        "instruction groups only single devices");
  }
  int prefix_count = 1;
  for (int t = 0; t <= j; ++t) prefix_count *= cards[t];
  const int suffix_count = tail[i];
  for (int p = 0; p < prefix_count; ++p) {
    for (int s = 0; s < suffix_count; ++s) {
      // Master keeps one group per prefix: the one whose suffix digits are
      // all zero.
      if (form.kind == Form::kMaster && s != 0) continue;
      std::vector<int> group(group_size);
      for (int mid = 0; mid < group_size; ++mid) {
        group[mid] = p * tail[j] + mid * tail[i] + s;
      }
      groups.push_back(std::move(group));
    }
  }
  return groups;
}

absl::StatusOr<LoweredProgram> Lower(const Program& program,
                                     const SynthesisHierarchy& hierarchy,
                                     const HierarchyEmbedding& embedding) {
  LoweredProgram lowered;
  lowered.steps.reserve(program.instructions.size());
  for (const ReductionInstruction& instruction : program.instructions) {
    auto patterns = DeriveGroups(hierarchy, instruction.slice,
                                 instruction.form);
    if (!patterns.ok()) return patterns.status();
    CollectiveStep step;
    step.op = instruction.op;
    for (int assignment = 0; assignment < embedding.num_assignments();
         ++assignment) {
      for (const std::vector<int>& pattern : *patterns) {
        std::vector<int> group;
        group.reserve(pattern.size());
        for (int member : pattern) {
          group.push_back(embedding.PhysicalOf(member, assignment));
        }
        step.groups.push_back(std::move(group));
      }
    }
    std::sort(step.groups.begin(), step.groups.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                return a.front() < b.front();
              });
    lowered.steps.push_back(std::move(step));
  }
  return lowered;
}

absl::StatusOr<LoweredProgram> Lower(const Program& program,
                                     const ParallelismMatrix& matrix,
                                     std::span<const int> reduction_axes,
                                     const SystemModel& system) {
  SynthesisHierarchy hierarchy = BuildHierarchy(
      matrix, reduction_axes, system, HierarchyKind::kReductionAxis);
  HierarchyEmbedding embedding(hierarchy, matrix, system);
  return Lower(program, hierarchy, embedding);
}

std::string StepFailure::Describe() const {
  return absl::StrFormat("step %d: %s over devices {%s}: %s", step,
                         std::string(ToString(op)),
                         absl::StrJoin(group, ","),
                         std::string(ToString(violation)));
}

absl::StatusOr<StateContext> RunLowered(const LoweredProgram& lowered, int k,
                                        StepFailure* failure) {
  StateContext ctx = InitialContext(k);
  for (size_t s = 0; s < lowered.steps.size(); ++s) {
    const CollectiveStep& step = lowered.steps[s];
    if (step.groups.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("step %d has no device groups", s));
    }
    for (const std::vector<int>& group : step.groups) {
      RuleViolation violation = ApplyCollectiveInPlace(ctx, group, step.op);
      if (violation != RuleViolation::kNone) {
        StepFailure details{.step = static_cast<int>(s),
                            .op = step.op,
                            .violation = violation,
                            .group = group};
        if (failure != nullptr) *failure = details;
        return absl::FailedPreconditionError(details.Describe());
      }
    }
  }
  return ctx;
}

std::string PrettyPrint(const ReductionInstruction& instruction,
                        const SynthesisHierarchy& hierarchy) {
  std::string form;
  switch (instruction.form.kind) {
    case Form::kInsideGroup:
      form = "InsideGroup";
      break;
    case Form::kParallel:
      form = absl::StrFormat(
          "Parallel(%s)", hierarchy.levels[instruction.form.ancestor].label);
      break;
    case Form::kMaster:
      form = absl::StrFormat(
          "Master(%s)", hierarchy.levels[instruction.form.ancestor].label);
      break;
  }
  return absl::StrFormat("Slice(%s) %s %s",
                         hierarchy.levels[instruction.slice].label, form,
                         std::string(ToString(instruction.op)));
}

std::string PrettyPrint(const Program& program,
                        const SynthesisHierarchy& hierarchy) {
  std::vector<std::string> parts;
  parts.reserve(program.instructions.size());
  for (const ReductionInstruction& instruction : program.instructions) {
    parts.push_back(PrettyPrint(instruction, hierarchy));
  }
  return absl::StrJoin(parts, "; ");
}

namespace {

absl::StatusOr<int> ResolveLevel(const SynthesisHierarchy& hierarchy,
                                 std::string_view label) {
  int index = hierarchy.LevelIndexOf(label);
  if (index < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown hierarchy level '%s'", std::string(label)));
  }
  return index;
}

absl::StatusOr<ReductionInstruction> ParseInstruction(
    const std::string& text, const SynthesisHierarchy& hierarchy) {
  std::vector<std::string> tokens =
      absl::StrSplit(text, ' ', absl::SkipEmpty());
  if (tokens.size() != 3) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected 'Slice(level) form op', got '%s'", text));
  }
  ReductionInstruction instruction;

  const std::string& slice = tokens[0];
  if (!slice.starts_with("Slice(") || !slice.ends_with(")")) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected 'Slice(level)', got '%s'", slice));
  }
  auto slice_level =
      ResolveLevel(hierarchy, slice.substr(6, slice.size() - 7));
  if (!slice_level.ok()) return slice_level.status();
  instruction.slice = *slice_level;

  const std::string& form = tokens[1];
  if (form == "InsideGroup") {
    instruction.form = Form::InsideGroup();
  } else if ((form.starts_with("Parallel(") || form.starts_with("Master(")) &&
             form.ends_with(")")) {
    size_t open = form.find('(');
    auto ancestor =
        ResolveLevel(hierarchy, form.substr(open + 1, form.size() - open - 2));
    if (!ancestor.ok()) return ancestor.status();
    instruction.form = form.starts_with("Parallel(")
                           ? Form::Parallel(*ancestor)
                           : Form::Master(*ancestor);
    if (instruction.form.ancestor >= instruction.slice) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "form level must be a strict ancestor of the slice in '%s'", text));
    }
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown form '%s'", form));
  }

  auto op = ParseCollective(tokens[2]);
  if (!op.ok()) return op.status();
  instruction.op = *op;
  return instruction;
}

}  // namespace

absl::StatusOr<Program> ParseProgram(std::string_view text,
                                     const SynthesisHierarchy& hierarchy) {
  Program program;
  std::vector<std::string> parts = absl::StrSplit(std::string(text), ';');
  for (std::string& part : parts) {
    std::string trimmed = std::move(part);
    while (!trimmed.empty() && trimmed.front() == ' ') trimmed.erase(0, 1);
    while (!trimmed.empty() && trimmed.back() == ' ') trimmed.pop_back();
    if (trimmed.empty()) continue;
    auto instruction = ParseInstruction(trimmed, hierarchy);
    if (!instruction.ok()) return instruction.status();
    program.instructions.push_back(*instruction);
  }
  if (program.instructions.empty()) {
    return absl::InvalidArgumentError("program must have >= 1 instruction");
  }
  return program;
}

}  // namespace redsynth
