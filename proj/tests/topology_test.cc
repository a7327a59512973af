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

#include "redsynth/topology.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace redsynth {
namespace {

TEST(ParseSystem, SixteenGpuExample) {
  auto system = ParseSystem(R"({
    "levels": [
      {"name": "rack", "count": 1},
      {"name": "server", "count": 2, "bandwidth_GBps": 1.0},
      {"name": "CPU", "count": 2, "bandwidth_GBps": 2.0},
      {"name": "GPU", "count": 4, "bandwidth_GBps": 4.0}
    ]
  })");
  ASSERT_TRUE(system.ok()) << system.status();
  EXPECT_EQ(system->num_levels(), 4);
  EXPECT_EQ(system->level(0).cardinality, 1);
  EXPECT_EQ(system->level(1).cardinality, 2);
  EXPECT_EQ(system->level(2).cardinality, 2);
  EXPECT_EQ(system->level(3).cardinality, 4);
  EXPECT_EQ(system->device_count(), 16);
}

TEST(ParseSystem, SingleLevelDegenerate) {
  auto system = ParseSystem(R"({"levels": [{"name": "gpu", "count": 1}]})");
  ASSERT_TRUE(system.ok()) << system.status();
  EXPECT_EQ(system->device_count(), 1);
  EXPECT_EQ(system->num_levels(), 1);
}

TEST(ParseSystem, TwoNodeA100PrependsRoot) {
  auto system = ParseSystem(R"({
    "levels": [
      {"name": "node", "count": 2, "bandwidth_GBps": 8.0},
      {"name": "gpu", "count": 16, "bandwidth_GBps": 270.0}
    ]
  })");
  ASSERT_TRUE(system.ok()) << system.status();
  ASSERT_EQ(system->num_levels(), 3);
  EXPECT_EQ(system->level(0).cardinality, 1);
  EXPECT_EQ(system->level(1).name, "node");
  EXPECT_EQ(system->level(2).bandwidth_bps, 270.0e9);
  EXPECT_EQ(system->device_count(), 32);
}

TEST(ParseSystem, Errors) {
  EXPECT_FALSE(ParseSystem("not json").ok());
  EXPECT_FALSE(ParseSystem(R"({"levels": []})").ok());
  EXPECT_FALSE(
      ParseSystem(R"({"levels": [{"name": "a", "count": 0}]})").ok());
  EXPECT_FALSE(
      ParseSystem(R"({"levels": [{"name": "a", "count": -2}]})").ok());
  // Missing bandwidth on a level with more than one child.
  EXPECT_FALSE(
      ParseSystem(R"({"levels": [{"name": "a", "count": 2}]})").ok());
  // Unknown keys are rejected rather than silently dropped.
  EXPECT_FALSE(ParseSystem(
                   R"({"levels": [{"name": "a", "count": 1, "bw": 3.0}]})")
                   .ok());
}

TEST(SerializeSystem, RoundTripsThroughParse) {
  const char* configs[] = {
      R"({"levels": [{"name": "node", "count": 2, "bandwidth_GBps": 8.0,
                      "latency_s": 0.000005},
                     {"name": "gpu", "count": 16, "bandwidth_GBps": 270.0}]})",
      R"({"levels": [{"name": "solo", "count": 1}]})",
      R"({"levels": [{"name": "rack", "count": 1},
                     {"name": "server", "count": 2, "bandwidth_GBps": 1.5},
                     {"name": "gpu", "count": 4, "bandwidth_GBps": 32.25}]})",
  };
  for (const char* config : configs) {
    auto system = ParseSystem(config);
    ASSERT_TRUE(system.ok()) << system.status();
    auto reparsed = ParseSystem(SerializeSystem(*system));
    ASSERT_TRUE(reparsed.ok()) << reparsed.status();
    EXPECT_EQ(*system, *reparsed);
  }
}

TEST(SystemModel, DeviceCount) {
  EXPECT_EQ(testing::MakeSystem({1, 2, 2, 4}).device_count(), 16);
  EXPECT_EQ(testing::MakeSystem({1}).device_count(), 1);
  EXPECT_EQ(testing::MakeSystem({1, 4, 16}).device_count(), 64);
}

TEST(SystemModel, CoordinateBijection) {
  SystemModel system = testing::MakeSystem({1, 2, 2, 4});
  for (int device = 0; device < system.device_count(); ++device) {
    std::vector<int> digits = system.CoordinateOf(device);
    EXPECT_EQ(system.DeviceOf(digits), device);
  }
  // Server 1, CPU 0, GPU 2 is device 10.
  EXPECT_EQ(system.DeviceOf(std::vector<int>{0, 1, 0, 2}), 10);
}

}  // namespace
}  // namespace redsynth
