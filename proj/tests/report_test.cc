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

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "redsynth/dsl.h"
#include "test_util.h"

namespace redsynth {
namespace {

std::string WriteTempConfig(const std::string& name,
                            const std::string& contents) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream out(path);
  out << contents;
  return path;
}

const char kTwoNodeConfig[] = R"({
  "levels": [
    {"name": "node", "count": 2, "bandwidth_GBps": 8.0},
    {"name": "gpu", "count": 16, "bandwidth_GBps": 270.0}
  ]
})";

RunRequest TwoNodeRequest() {
  static const std::string* path = new std::string(
      WriteTempConfig("report_test_a100.json", kTwoNodeConfig));
  RunRequest request;
  request.system_path = *path;
  request.axes = {8, 4};
  request.reduction_axes = {0};
  request.algo = CollectiveAlgo::kRing;
  request.payload_bytes = int64_t{4} << 30;
  request.size_limit = 5;
  return request;
}

TEST(RunPipeline, TwoMatricesWithRankings) {
  auto report = RunPipeline(TwoNodeRequest());
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->matrices.size(), 2u);
  EXPECT_EQ(report->device_count, 32);
  for (const MatrixReport& matrix : report->matrices) {
    ASSERT_FALSE(matrix.programs.empty());
    // Rank order, fastest first.
    for (size_t i = 1; i < matrix.programs.size(); ++i) {
      EXPECT_LE(matrix.programs[i - 1].seconds, matrix.programs[i].seconds);
    }
    // Exactly one baseline with speedup defined against it.
    for (const ProgramReport& program : matrix.programs) {
      EXPECT_GT(program.seconds, 0.0);
      EXPECT_GT(program.speedup, 0.0);
    }
  }
  EXPECT_GE(report->best_matrix, 0);
  // The intra-node placement wins overall.
  EXPECT_EQ(report->best_matrix, 0);
}

TEST(RunPipeline, ReportedProgramsRoundTripThroughTheGrammar) {
  auto report = RunPipeline(TwoNodeRequest());
  ASSERT_TRUE(report.ok());
  auto system = LoadSystemFile(TwoNodeRequest().system_path);
  ASSERT_TRUE(system.ok());
  for (const MatrixReport& matrix : report->matrices) {
    ParallelismMatrix factors = ParallelismMatrix::FromRows(matrix.factors);
    SynthesisHierarchy hierarchy =
        BuildHierarchy(factors, std::vector<int>{0}, *system,
                       HierarchyKind::kReductionAxis);
    for (const ProgramReport& program : matrix.programs) {
      auto parsed = ParseProgram(program.text, hierarchy);
      ASSERT_TRUE(parsed.ok()) << program.text << ": " << parsed.status();
      EXPECT_EQ(PrettyPrint(*parsed, hierarchy), program.text);
    }
  }
}

TEST(RunPipeline, JsonIsByteDeterministic) {
  auto first = RunPipeline(TwoNodeRequest());
  auto second = RunPipeline(TwoNodeRequest());
  ASSERT_TRUE(first.ok() && second.ok());
  EXPECT_EQ(ReportToJson(*first), ReportToJson(*second));
  EXPECT_EQ(ReportToCsv(*first), ReportToCsv(*second));
}

TEST(RunPipeline, ThreadCountDoesNotChangeTheBytes) {
  auto reference = RunPipeline(TwoNodeRequest());
  ASSERT_TRUE(reference.ok());
  RunRequest threaded = TwoNodeRequest();
  threaded.max_threads = 4;
  auto parallel = RunPipeline(threaded);
  ASSERT_TRUE(parallel.ok());
  EXPECT_EQ(ReportToJson(*reference), ReportToJson(*parallel));
}

TEST(RunPipeline, SingleDeviceYieldsAnExplanatoryNote) {
  std::string path = WriteTempConfig(
      "report_test_solo.json", R"({"levels": [{"name": "gpu", "count": 1}]})");
  RunRequest request;
  request.system_path = path;
  request.axes = {1};
  request.reduction_axes = {0};
  request.payload_bytes = 1024;
  auto report = RunPipeline(request);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->matrices.size(), 1u);
  EXPECT_TRUE(report->matrices[0].programs.empty());
  EXPECT_FALSE(report->matrices[0].note.empty());
  EXPECT_FALSE(report->note.empty());
  EXPECT_EQ(report->best_matrix, -1);
  // Valid CSV with only the header.
  EXPECT_EQ(ReportToCsv(*report),
            "matrix_id,program_id,program,seconds,speedup\n");
}

TEST(RunPipeline, ThreeAxesWithTwoReductionAxes) {
  std::string path = WriteTempConfig("report_test_a100_4n.json", R"({
    "levels": [
      {"name": "node", "count": 4, "bandwidth_GBps": 8.0},
      {"name": "gpu", "count": 16, "bandwidth_GBps": 270.0}
    ]
  })");
  RunRequest request;
  request.system_path = path;
  request.axes = {4, 2, 8};
  request.reduction_axes = {0, 2};
  request.algo = CollectiveAlgo::kRing;
  request.payload_bytes = int64_t{1} << 30;
  request.size_limit = 4;
  auto report = RunPipeline(request);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_FALSE(report->matrices.empty());
  for (const MatrixReport& matrix : report->matrices) {
    ASSERT_FALSE(matrix.programs.empty());
    // Both reduction axes fold into one hierarchy whose device space is
    // p_0 * p_2 = 32.
    int product = 1;
    for (int card : matrix.hierarchy_cardinalities) product *= card;
    EXPECT_EQ(product, 32);
  }
}

TEST(RunPipeline, ErrorsCarryModuleProvenance) {
  RunRequest request = TwoNodeRequest();
  request.system_path = "/nonexistent/system.json";
  auto missing = RunPipeline(request);
  ASSERT_FALSE(missing.ok());
  EXPECT_NE(missing.status().message().find("topology:"), std::string::npos);

  RunRequest bad_axes = TwoNodeRequest();
  bad_axes.axes = {3, 4};
  auto mismatch = RunPipeline(bad_axes);
  ASSERT_FALSE(mismatch.ok());
  EXPECT_NE(mismatch.status().message().find("placement:"),
            std::string::npos);
}

TEST(ReportToCsv, RowsFollowRankOrder) {
  auto report = RunPipeline(TwoNodeRequest());
  ASSERT_TRUE(report.ok());
  std::string csv = ReportToCsv(*report);
  std::istringstream lines(csv);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "matrix_id,program_id,program,seconds,speedup");
  int rows = 0;
  double previous_seconds = 0.0;
  int previous_matrix = -1;
  while (std::getline(lines, line)) {
    ++rows;
    int matrix_id = 0;
    double seconds = 0.0;
    char quote;
    std::istringstream fields(line);
    fields >> matrix_id;
    // Seconds is the 4th comma-separated field; the program text is quoted
    // and contains no commas.
    size_t close_quote = line.rfind('"');
    ASSERT_NE(close_quote, std::string::npos);
    std::istringstream tail(line.substr(close_quote + 2));
    tail >> seconds;
    (void)quote;
    if (matrix_id == previous_matrix) {
      EXPECT_GE(seconds, previous_seconds);
    }
    previous_matrix = matrix_id;
    previous_seconds = seconds;
  }
  size_t programs = 0;
  for (const MatrixReport& matrix : report->matrices) {
    programs += matrix.programs.size();
  }
  EXPECT_EQ(static_cast<size_t>(rows), programs);
}

TEST(RunToFile, WritesTheRequestedFile) {
  RunRequest request = TwoNodeRequest();
  request.out_path = ::testing::TempDir() + "report_test_out.json";
  ASSERT_TRUE(redsynth::Run(request).ok());
  std::ifstream in(request.out_path);
  ASSERT_TRUE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto report = RunPipeline(request);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(buffer.str(), ReportToJson(*report));
}

}  // namespace
}  // namespace redsynth
