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

#ifndef REDSYNTH_REPORT_H_
#define REDSYNTH_REPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "redsynth/placement.h"
#include "redsynth/simulator.h"
#include "redsynth/synthesizer.h"
#include "redsynth/topology.h"

namespace redsynth {

enum class ReportFormat { kJson, kCsv };

// A full pipeline invocation: enumerate matrices, synthesize, simulate,
// rank, write a report.
struct RunRequest {
  std::string system_path;
  std::vector<int> axes;
  std::vector<int> reduction_axes;
  CollectiveAlgo algo = CollectiveAlgo::kRing;
  int64_t payload_bytes = 0;
  int size_limit = 5;
  std::string out_path;  // empty = stdout
  ReportFormat format = ReportFormat::kJson;
  int max_threads = 1;  // per-matrix workers; report order is fixed
};

struct StepSummary {
  std::string op;
  int group_count = 0;
  int group_size = 0;
  std::string span_level;
  double bytes_per_device = 0.0;
  double seconds = 0.0;
};

struct ProgramReport {
  int id = 0;  // emission index within the matrix
  std::string text;
  std::vector<StepSummary> steps;
  double seconds = 0.0;
  double speedup = 1.0;
};

struct MatrixReport {
  int id = 0;
  std::vector<std::vector<int>> factors;
  std::vector<std::string> hierarchy_labels;
  std::vector<int> hierarchy_cardinalities;
  int64_t explored = 0;
  int64_t pruned = 0;
  std::string note;                     // set when nothing was synthesized
  std::vector<ProgramReport> programs;  // in rank order, fastest first
};

struct Report {
  std::vector<LevelSpec> system_levels;
  int device_count = 1;
  std::vector<int> axes;
  std::vector<int> reduction_axes;
  std::string algo;
  int64_t payload_bytes = 0;
  int size_limit = 5;
  std::vector<MatrixReport> matrices;
  int best_matrix = -1;  // -1 when nothing was synthesized anywhere
  int best_program = -1;
  double best_seconds = 0.0;
  std::string note;
};

// Computes the report. Deterministic: identical inputs produce identical
// reports regardless of max_threads.
absl::StatusOr<Report> RunPipeline(const RunRequest& request);

// Byte-deterministic serializations.
std::string ReportToJson(const Report& report);
std::string ReportToCsv(const Report& report);

// RunPipeline plus writing the chosen format to request.out_path (or
// stdout).
absl::Status Run(const RunRequest& request);

}  // namespace redsynth

#endif  // REDSYNTH_REPORT_H_
