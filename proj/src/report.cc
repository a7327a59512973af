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

#include "redsynth/report.h"

#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "nlohmann/json.hpp"
#include "redsynth/dsl.h"
#include "redsynth/hierarchy.h"

namespace redsynth {

namespace {

// Locates the single-AllReduce baseline: the length-1 program whose one
// instruction is the canonical whole-group AllReduce.
int BaselineIndex(const SynthesisResult& result) {
  for (size_t i = 0; i < result.programs.size(); ++i) {
    const Program& program = result.programs[i].program;
    if (program.instructions.size() != 1) continue;
    const ReductionInstruction& instr = program.instructions[0];
    if (instr.op == Collective::kAllReduce &&
        instr.form.kind == Form::kInsideGroup && instr.slice == 0) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

absl::StatusOr<MatrixReport> BuildMatrixReport(
    int matrix_id, const ParallelismMatrix& matrix,
    const std::vector<int>& reduction_axes, const SystemModel& system,
    const RunRequest& request) {
  MatrixReport report;
  report.id = matrix_id;
  for (int axis = 0; axis < matrix.num_axes(); ++axis) {
    report.factors.push_back(matrix.AxisRow(axis));
  }

  SynthesisConfig cfg{.size_limit = request.size_limit};
  auto synthesis = Synthesize(matrix, reduction_axes, system, cfg);
  if (!synthesis.ok()) return synthesis.status();

  for (const SynthLevel& level : synthesis->hierarchy.levels) {
    report.hierarchy_labels.push_back(level.label);
    report.hierarchy_cardinalities.push_back(level.cardinality);
  }
  report.explored = synthesis->stats.explored;
  report.pruned =
      synthesis->stats.pruned_semantic + synthesis->stats.pruned_repeat;

  if (synthesis->programs.empty()) {
    report.note = "nothing to reduce: the reduction group has one device";
    return report;
  }

  CostModelConfig cost_cfg{.algo = request.algo,
                           .payload_bytes = request.payload_bytes};
  std::vector<double> seconds;
  std::vector<CostReport> costs;
  seconds.reserve(synthesis->programs.size());
  for (const SynthesizedProgram& entry : synthesis->programs) {
    auto cost = Simulate(entry.lowered, system, cost_cfg);
    if (!cost.ok()) return cost.status();
    seconds.push_back(cost->total_seconds);
    costs.push_back(*std::move(cost));
  }

  int baseline = BaselineIndex(*synthesis);
  if (baseline < 0) {
    return absl::InternalError("baseline AllReduce program missing");
  }
  auto ranked = RankPrograms(seconds, baseline);
  if (!ranked.ok()) return ranked.status();

  for (const RankedProgram& rank : *ranked) {
    const SynthesizedProgram& entry = synthesis->programs[rank.index];
    ProgramReport program;
    program.id = rank.index;
    program.text = PrettyPrint(entry.program, synthesis->hierarchy);
    program.seconds = rank.seconds;
    program.speedup = rank.speedup;
    const CostReport& cost = costs[rank.index];
    for (size_t s = 0; s < entry.lowered.steps.size(); ++s) {
      const CollectiveStep& step = entry.lowered.steps[s];
      StepSummary summary;
      summary.op = std::string(ToString(step.op));
      summary.group_count = static_cast<int>(step.groups.size());
      summary.group_size = static_cast<int>(step.groups.front().size());
      summary.span_level =
          system.level(cost.steps[s].bottleneck_level).name;
      summary.bytes_per_device = cost.steps[s].bytes_per_device;
      summary.seconds = cost.steps[s].seconds;
      program.steps.push_back(std::move(summary));
    }
    report.programs.push_back(std::move(program));
  }
  return report;
}

int WorkerCount(const RunRequest& request, int tasks) {
  int workers = request.max_threads;
  const char* env = std::getenv("SYNTH_THREADS");
  if (env != nullptr) {
    int parsed = std::atoi(env);
    if (parsed >= 1) workers = parsed;
  }
  workers = std::min(workers, tasks);
  return std::max(workers, 1);
}

}  // namespace

absl::StatusOr<Report> RunPipeline(const RunRequest& request) {
  auto system = LoadSystemFile(request.system_path);
  if (!system.ok()) {
    return absl::Status(system.status().code(),
                        absl::StrFormat("topology: %s",
                                        system.status().message()));
  }

  ParallelismSpec spec{.axes = request.axes,
                       .reduction_axes = request.reduction_axes};
  auto matrices = EnumerateMatrices(*system, spec);
  if (!matrices.ok()) {
    return absl::Status(matrices.status().code(),
                        absl::StrFormat("placement: %s",
                                        matrices.status().message()));
  }

  Report report;
  report.system_levels = system->levels();
  report.device_count = system->device_count();
  report.axes = request.axes;
  report.reduction_axes = request.reduction_axes;
  report.algo = std::string(ToString(request.algo));
  report.payload_bytes = request.payload_bytes;
  report.size_limit = request.size_limit;

  const int count = static_cast<int>(matrices->size());
  std::vector<absl::StatusOr<MatrixReport>> sections;
  sections.reserve(count);
  const int workers = WorkerCount(request, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) {
      sections.push_back(BuildMatrixReport(i, (*matrices)[i],
                                           request.reduction_axes, *system,
                                           request));
    }
  } else {
    // Per-matrix work is pure; run it on a bounded set of async workers and
    // collect in matrix order.
    std::vector<std::future<absl::StatusOr<MatrixReport>>> futures(count);
    for (int start = 0; start < count; start += workers) {
      int end = std::min(count, start + workers);
      for (int i = start; i < end; ++i) {
        futures[i] = std::async(std::launch::async, [&, i] {
          return BuildMatrixReport(i, (*matrices)[i], request.reduction_axes,
                                   *system, request);
        });
      }
      for (int i = start; i < end; ++i) futures[i].wait();
    }
    for (int i = 0; i < count; ++i) sections.push_back(futures[i].get());
  }

  for (int i = 0; i < count; ++i) {
    if (!sections[i].ok()) {
      return absl::Status(
          sections[i].status().code(),
          absl::StrFormat("matrix %d: %s", i, sections[i].status().message()));
    }
    report.matrices.push_back(*std::move(sections[i]));
  }

  for (const MatrixReport& matrix : report.matrices) {
    if (matrix.programs.empty()) continue;
    const ProgramReport& best = matrix.programs.front();
    if (report.best_matrix < 0 || best.seconds < report.best_seconds) {
      report.best_matrix = matrix.id;
      report.best_program = best.id;
      report.best_seconds = best.seconds;
    }
  }
  if (report.best_matrix < 0) {
    report.note = "no reduction programs: every reduction group is a single "
                  "device, so no communication is required";
  }
  return report;
}

namespace {

nlohmann::ordered_json ToJson(const StepSummary& step) {
  return nlohmann::ordered_json{{"op", step.op},
                                {"groups", step.group_count},
                                {"group_size", step.group_size},
                                {"span_level", step.span_level},
                                {"bytes_per_device", step.bytes_per_device},
                                {"seconds", step.seconds}};
}

}  // namespace

std::string ReportToJson(const Report& report) {
  nlohmann::ordered_json doc;
  doc["system"] = nlohmann::ordered_json::array();
  for (const LevelSpec& level : report.system_levels) {
    nlohmann::ordered_json entry{{"name", level.name},
                                 {"count", level.cardinality}};
    entry["bandwidth_GBps"] = level.bandwidth_bps / 1e9;
    if (level.latency_s != 0.0) entry["latency_s"] = level.latency_s;
    doc["system"].push_back(std::move(entry));
  }
  doc["device_count"] = report.device_count;
  doc["axes"] = report.axes;
  doc["reduction_axes"] = report.reduction_axes;
  doc["algo"] = report.algo;
  doc["payload_bytes"] = report.payload_bytes;
  doc["size_limit"] = report.size_limit;
  if (!report.note.empty()) doc["note"] = report.note;
  doc["matrices"] = nlohmann::ordered_json::array();
  for (const MatrixReport& matrix : report.matrices) {
    nlohmann::ordered_json section;
    section["id"] = matrix.id;
    section["factors"] = matrix.factors;
    section["hierarchy"] = {{"labels", matrix.hierarchy_labels},
                            {"cardinalities", matrix.hierarchy_cardinalities}};
    section["stats"] = {{"programs", matrix.programs.size()},
                        {"explored", matrix.explored},
                        {"pruned", matrix.pruned}};
    if (!matrix.note.empty()) section["note"] = matrix.note;
    section["programs"] = nlohmann::ordered_json::array();
    for (const ProgramReport& program : matrix.programs) {
      nlohmann::ordered_json entry;
      entry["id"] = program.id;
      entry["text"] = program.text;
      entry["seconds"] = program.seconds;
      entry["speedup"] = program.speedup;
      entry["steps"] = nlohmann::ordered_json::array();
      for (const StepSummary& step : program.steps) {
        entry["steps"].push_back(ToJson(step));
      }
      section["programs"].push_back(std::move(entry));
    }
    doc["matrices"].push_back(std::move(section));
  }
  if (report.best_matrix >= 0) {
    doc["best"] = {{"matrix", report.best_matrix},
                   {"program", report.best_program},
                   {"seconds", report.best_seconds}};
  }
  return doc.dump(2) + "\n";
}

std::string ReportToCsv(const Report& report) {
  std::string out = "matrix_id,program_id,program,seconds,speedup\n";
  for (const MatrixReport& matrix : report.matrices) {
    for (const ProgramReport& program : matrix.programs) {
      out += absl::StrFormat("%d,%d,\"%s\",%.17g,%.17g\n", matrix.id,
                             program.id, program.text, program.seconds,
                             program.speedup);
    }
  }
  return out;
}

absl::Status Run(const RunRequest& request) {
  auto report = RunPipeline(request);
  if (!report.ok()) return report.status();
  std::string text = request.format == ReportFormat::kJson
                         ? ReportToJson(*report)
                         : ReportToCsv(*report);
  if (request.out_path.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream out(request.out_path, std::ios::binary);
  if (!out) {
    return absl::UnavailableError(
        absl::StrFormat("cannot write output file '%s'", request.out_path));
  }
  out << text;
  return absl::OkStatus();
}

}  // namespace redsynth
