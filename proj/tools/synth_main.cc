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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "redsynth/report.h"
#include "redsynth/simulator.h"

int main(int argc, char** argv) {
  CLI::App app{
      "Enumerates parallelism placements for a hierarchical system, "
      "synthesizes every semantically valid reduction strategy, and ranks "
      "them with a topology-aware cost model."};

  std::string system_path;
  std::vector<int> axes;
  std::vector<int> reduction_axes;
  std::string algo = "ring";
  int64_t payload_bytes = 0;
  int size_limit = 5;
  std::string out_path;
  std::string format = "json";
  bool seed_order = false;

  app.add_option("--system", system_path, "system topology JSON file")
      ->required();
  app.add_option("--axes", axes, "parallelism axis sizes (comma separated)")
      ->required()
      ->delimiter(',');
  app.add_option("--reduce", reduction_axes,
                 "indices of the axes to reduce (comma separated)")
      ->required()
      ->delimiter(',');
  app.add_option("--algo", algo, "collective algorithm: ring|tree")
      ->check(CLI::IsMember({"ring", "tree"}));
  app.add_option("--bytes", payload_bytes, "payload bytes per device")
      ->required();
  app.add_option("--size-limit", size_limit,
                 "maximum program length (default 5)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--seed-order", seed_order, "reserved; no effect");

  CLI11_PARSE(app, argc, argv);
  (void)seed_order;

  redsynth::RunRequest request;
  request.system_path = system_path;
  request.axes = axes;
  request.reduction_axes = reduction_axes;
  request.algo = algo == "tree" ? redsynth::CollectiveAlgo::kTree
                                : redsynth::CollectiveAlgo::kRing;
  request.payload_bytes = payload_bytes;
  request.size_limit = size_limit;
  request.out_path = out_path;
  request.format = format == "csv" ? redsynth::ReportFormat::kCsv
                                   : redsynth::ReportFormat::kJson;

  absl::Status status = redsynth::Run(request);
  if (!status.ok()) {
    std::cerr << "synth: " << status.message() << "\n";
    return 1;
  }
  return 0;
}
