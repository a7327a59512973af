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

#include "redsynth/semantics.h"

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace redsynth {

std::string_view ToString(Collective op) {
  switch (op) {
    case Collective::kAllReduce:
      return "AllReduce";
    case Collective::kReduceScatter:
      return "ReduceScatter";
    case Collective::kAllGather:
      return "AllGather";
    case Collective::kReduce:
      return "Reduce";
    case Collective::kBroadcast:
      return "Broadcast";
  }
  return "?";
}

absl::StatusOr<Collective> ParseCollective(std::string_view text) {
  for (Collective op : kAllCollectives) {
    if (text == ToString(op)) return op;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown collective '%s'", std::string(text)));
}

std::string_view ToString(RuleViolation violation) {
  switch (violation) {
    case RuleViolation::kNone:
      return "none";
    case RuleViolation::kGroupTooSmall:
      return "group has fewer than two devices";
    case RuleViolation::kDeviceOutOfRange:
      return "device outside the state context";
    case RuleViolation::kRowSetMismatch:
      return "devices hold different chunk sets";
    case RuleViolation::kChunkOverlap:
      return "chunk already reduced on another device";
    case RuleViolation::kIndivisibleScatter:
      return "chunk count not divisible by group size";
    case RuleViolation::kRowSetOverlap:
      return "gather sources hold overlapping chunk sets";
    case RuleViolation::kBroadcastMissingData:
      return "broadcast root lacks data held by a member";
    case RuleViolation::kBroadcastNoNewData:
      return "broadcast would not add information";
  }
  return "?";
}

bool DeviceState::RowEmpty(int row) const {
  for (int w = 0; w < words_per_row_; ++w) {
    if (word(row, w) != 0) return false;
  }
  return true;
}

int DeviceState::NonEmptyRowCount() const {
  int count = 0;
  for (int r = 0; r < k_; ++r) {
    if (!RowEmpty(r)) ++count;
  }
  return count;
}

std::vector<int> DeviceState::NonEmptyRows() const {
  std::vector<int> rows;
  for (int r = 0; r < k_; ++r) {
    if (!RowEmpty(r)) rows.push_back(r);
  }
  return rows;
}

void DeviceState::OrWith(const DeviceState& other) {
  for (size_t i = 0; i < bits_.size(); ++i) {
    bits_[i] |= other.bits_[i];
  }
}

void DeviceState::ClearRow(int row) {
  for (int w = 0; w < words_per_row_; ++w) {
    mutable_word(row, w) = 0;
  }
}

void DeviceState::Clear() { bits_.assign(bits_.size(), 0); }

bool DeviceState::Contains(const DeviceState& other) const {
  for (size_t i = 0; i < bits_.size(); ++i) {
    if ((other.bits_[i] & ~bits_[i]) != 0) return false;
  }
  return true;
}

std::string DeviceState::ToDebugString() const {
  std::string out;
  out.reserve(static_cast<size_t>(k_) * (k_ + 1));
  for (int r = 0; r < k_; ++r) {
    for (int c = 0; c < k_; ++c) {
      out.push_back(bit(r, c) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

StateContext InitialContext(int k) {
  StateContext ctx(k);
  for (int device = 0; device < k; ++device) {
    for (int row = 0; row < k; ++row) {
      ctx.mutable_state(device).SetBit(row, device);
    }
  }
  return ctx;
}

StateContext GoalContext(int k, std::span<const std::vector<int>> groups) {
  StateContext ctx(k);
  for (const std::vector<int>& group : groups) {
    for (int device : group) {
      DeviceState& state = ctx.mutable_state(device);
      for (int row = 0; row < k; ++row) {
        for (int col : group) {
          state.SetBit(row, col);
        }
      }
    }
  }
  return ctx;
}

namespace {

// Do all group members hold exactly the same set of non-empty rows?
bool RowSetsEqual(const StateContext& ctx, std::span<const int> group) {
  const DeviceState& first = ctx.state(group[0]);
  for (int r = 0; r < first.k(); ++r) {
    bool empty = first.RowEmpty(r);
    for (size_t m = 1; m < group.size(); ++m) {
      if (ctx.state(group[m]).RowEmpty(r) != empty) return false;
    }
  }
  return true;
}

// Within each row, no bit may be contributed by two members. Equivalent to
// pairwise disjointness per row since the contribution counts are additive.
bool RowsPairwiseDisjoint(const StateContext& ctx, std::span<const int> group) {
  const int k = ctx.state(group[0]).k();
  const int wpr = ctx.state(group[0]).words_per_row();
  for (int r = 0; r < k; ++r) {
    for (int w = 0; w < wpr; ++w) {
      uint64_t seen = 0;
      for (int member : group) {
        uint64_t bits = ctx.state(member).word(r, w);
        if ((seen & bits) != 0) return false;
        seen |= bits;
      }
    }
  }
  return true;
}

// Premise of the reduce-style rules (AllReduce, ReduceScatter, Reduce).
RuleViolation CheckReducePremises(const StateContext& ctx,
                                  std::span<const int> group) {
  if (!RowSetsEqual(ctx, group)) return RuleViolation::kRowSetMismatch;
  if (!RowsPairwiseDisjoint(ctx, group)) return RuleViolation::kChunkOverlap;
  return RuleViolation::kNone;
}

DeviceState SumStates(const StateContext& ctx, std::span<const int> group) {
  DeviceState sum = ctx.state(group[0]);
  for (size_t m = 1; m < group.size(); ++m) {
    sum.OrWith(ctx.state(group[m]));
  }
  return sum;
}

}  // namespace

RuleViolation CheckCollective(const StateContext& ctx,
                              std::span<const int> group, Collective op) {
  if (group.size() < 2) return RuleViolation::kGroupTooSmall;
  for (int member : group) {
    if (member < 0 || member >= ctx.k()) {
      return RuleViolation::kDeviceOutOfRange;
    }
  }

  switch (op) {
    case Collective::kAllReduce:
    case Collective::kReduce:
      return CheckReducePremises(ctx, group);

    case Collective::kReduceScatter: {
      if (RuleViolation v = CheckReducePremises(ctx, group);
          v != RuleViolation::kNone) {
        return v;
      }
      if (ctx.state(group[0]).NonEmptyRowCount() % group.size() != 0) {
        return RuleViolation::kIndivisibleScatter;
      }
      return RuleViolation::kNone;
    }

    case Collective::kAllGather: {
      const int k = ctx.k();
      for (int r = 0; r < k; ++r) {
        int holders = 0;
        for (int member : group) {
          if (!ctx.state(member).RowEmpty(r)) ++holders;
        }
        if (holders > 1) return RuleViolation::kRowSetOverlap;
      }
      return RuleViolation::kNone;
    }

    case Collective::kBroadcast: {
      const DeviceState& root = ctx.state(group[0]);
      bool gains = false;
      for (size_t m = 1; m < group.size(); ++m) {
        const DeviceState& member = ctx.state(group[m]);
        if (!root.Contains(member)) {
          return RuleViolation::kBroadcastMissingData;
        }
        if (!(member == root)) gains = true;
      }
      // Information increase: the root must be strictly more informative
      // than at least one member.
      if (!gains) return RuleViolation::kBroadcastNoNewData;
      return RuleViolation::kNone;
    }
  }
  return RuleViolation::kNone;
}

RuleViolation ApplyCollectiveInPlace(StateContext& ctx,
                                     std::span<const int> group,
                                     Collective op) {
  if (RuleViolation v = CheckCollective(ctx, group, op);
      v != RuleViolation::kNone) {
    return v;
  }

  switch (op) {
    case Collective::kAllReduce:
    case Collective::kAllGather: {
      DeviceState sum = SumStates(ctx, group);
      for (int member : group) {
        ctx.mutable_state(member) = sum;
      }
      break;
    }

    case Collective::kReduceScatter: {
      std::vector<int> rows = ctx.state(group[0]).NonEmptyRows();
      DeviceState sum = SumStates(ctx, group);
      const size_t share = rows.size() / group.size();
      for (size_t m = 0; m < group.size(); ++m) {
        DeviceState& state = ctx.mutable_state(group[m]);
        state = sum;
        // Member m keeps the m-th contiguous run of non-empty rows.
        for (size_t r = 0; r < rows.size(); ++r) {
          if (r / share != m) state.ClearRow(rows[r]);
        }
      }
      break;
    }

    case Collective::kReduce: {
      DeviceState sum = SumStates(ctx, group);
      ctx.mutable_state(group[0]) = sum;
      for (size_t m = 1; m < group.size(); ++m) {
        ctx.mutable_state(group[m]).Clear();
      }
      break;
    }

    case Collective::kBroadcast: {
      DeviceState copy = ctx.state(group[0]);
      for (size_t m = 1; m < group.size(); ++m) {
        ctx.mutable_state(group[m]) = copy;
      }
      break;
    }
  }
  return RuleViolation::kNone;
}

absl::StatusOr<StateContext> ApplyCollective(const StateContext& ctx,
                                             std::span<const int> group,
                                             Collective op) {
  StateContext next = ctx;
  RuleViolation violation = ApplyCollectiveInPlace(next, group, op);
  if (violation != RuleViolation::kNone) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "%s over devices {%s}: %s", std::string(ToString(op)),
        absl::StrJoin(group, ","), std::string(ToString(violation))));
  }
  return next;
}

namespace {

bool ReachableRec(const StateContext& current, const StateContext& goal,
                  std::span<const CollectiveStep> universe, int depth) {
  if (current == goal) return true;
  if (depth == 0) return false;
  for (const CollectiveStep& step : universe) {
    StateContext next = current;
    bool ok = true;
    for (const std::vector<int>& group : step.groups) {
      if (ApplyCollectiveInPlace(next, group, step.op) !=
          RuleViolation::kNone) {
        ok = false;
        break;
      }
    }
    if (ok && ReachableRec(next, goal, universe, depth - 1)) return true;
  }
  return false;
}

}  // namespace

bool ReachableWithin(const StateContext& start, const StateContext& goal,
                     std::span<const CollectiveStep> universe, int depth) {
  return ReachableRec(start, goal, universe, depth);
}

}  // namespace redsynth
