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

#ifndef REDSYNTH_SEMANTICS_H_
#define REDSYNTH_SEMANTICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace redsynth {

enum class Collective {
  kAllReduce,
  kReduceScatter,
  kAllGather,
  kReduce,
  kBroadcast,
};

inline constexpr Collective kAllCollectives[] = {
    Collective::kAllReduce, Collective::kReduceScatter,
    Collective::kAllGather, Collective::kReduce, Collective::kBroadcast};

std::string_view ToString(Collective op);
absl::StatusOr<Collective> ParseCollective(std::string_view text);

// Contribution-tracking state of one device: a k x k bit matrix where bit
// (r, c) records that device c's original chunk r has been folded into this
// device's copy of chunk r. An all-zero row means the device does not hold
// that chunk at all.
class DeviceState {
 public:
  explicit DeviceState(int k)
      : k_(k),
        words_per_row_((k + 63) / 64),
        bits_(static_cast<size_t>(k) * words_per_row_, 0) {}

  int k() const { return k_; }

  bool bit(int row, int col) const {
    return (word(row, col / 64) >> (col % 64)) & 1;
  }
  void SetBit(int row, int col) {
    mutable_word(row, col / 64) |= uint64_t{1} << (col % 64);
  }

  bool RowEmpty(int row) const;
  int NonEmptyRowCount() const;
  std::vector<int> NonEmptyRows() const;

  void OrWith(const DeviceState& other);
  void ClearRow(int row);
  void Clear();

  // True if every set bit of `other` is set here.
  bool Contains(const DeviceState& other) const;

  // k rows of '0'/'1' characters, row 0 first.
  std::string ToDebugString() const;

  friend bool operator==(const DeviceState&, const DeviceState&) = default;

  uint64_t word(int row, int w) const {
    return bits_[static_cast<size_t>(row) * words_per_row_ + w];
  }
  uint64_t& mutable_word(int row, int w) {
    return bits_[static_cast<size_t>(row) * words_per_row_ + w];
  }
  int words_per_row() const { return words_per_row_; }

 private:
  int k_;
  int words_per_row_;
  std::vector<uint64_t> bits_;
};

// Maps every device in a k-device universe to its state. Value-semantic;
// copies are cheap at the sizes the synthesizer works with.
class StateContext {
 public:
  explicit StateContext(int k) : states_(k, DeviceState(k)) {}

  int k() const { return static_cast<int>(states_.size()); }
  const DeviceState& state(int device) const { return states_[device]; }
  DeviceState& mutable_state(int device) { return states_[device]; }

  friend bool operator==(const StateContext&, const StateContext&) = default;

 private:
  std::vector<DeviceState> states_;
};

// The start-of-program context: device i holds only its own data, so every
// row of its state has exactly bit i set.
StateContext InitialContext(int k);

// The desired post-condition for a reduction-group partition: device i ends
// with, in every row, exactly the columns of its own group.
StateContext GoalContext(int k, std::span<const std::vector<int>> groups);

// Why a collective's precondition failed, named after the premise that was
// violated.
enum class RuleViolation {
  kNone,
  kGroupTooSmall,       // fewer than two participants
  kDeviceOutOfRange,    // group member not in the context
  kRowSetMismatch,      // members disagree on which chunks they hold
  kChunkOverlap,        // same contribution present in two members
  kIndivisibleScatter,  // chunk count not divisible by the group size
  kRowSetOverlap,       // gather sources hold overlapping chunk sets
  kBroadcastMissingData,  // root is not a superset of some member
  kBroadcastNoNewData,    // no member would learn anything
};

std::string_view ToString(RuleViolation violation);

// Evaluates one collective's preconditions over `group` (ordered, root
// first) without touching the context.
RuleViolation CheckCollective(const StateContext& ctx,
                              std::span<const int> group, Collective op);

// Applies one collective directly to `ctx`. If a precondition fails,
// returns the violation and leaves `ctx` untouched. This is the
// allocation-free core used by the synthesizer.
RuleViolation ApplyCollectiveInPlace(StateContext& ctx,
                                     std::span<const int> group,
                                     Collective op);

// Pure variant: returns the successor context, or an error naming the
// violated rule and the offending devices. A failed step means no extension
// of the program can reach the goal.
absl::StatusOr<StateContext> ApplyCollective(const StateContext& ctx,
                                             std::span<const int> group,
                                             Collective op);

// One lowered step: disjoint device groups all performing `op` at once.
struct CollectiveStep {
  std::vector<std::vector<int>> groups;
  Collective op = Collective::kAllReduce;

  friend bool operator==(const CollectiveStep&, const CollectiveStep&) =
      default;
};

// Brute-force reachability: is there a sequence of at most `depth` steps
// drawn from `universe` taking `start` to `goal`? Exponential; intended for
// verification at k <= 8, depth <= 4.
bool ReachableWithin(const StateContext& start, const StateContext& goal,
                     std::span<const CollectiveStep> universe, int depth);

}  // namespace redsynth

#endif  // REDSYNTH_SEMANTICS_H_
