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

#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace redsynth {

absl::StatusOr<SystemModel> SystemModel::Create(std::vector<LevelSpec> levels) {
  if (levels.empty()) {
    return absl::InvalidArgumentError("system must have at least one level");
  }
  int64_t count = 1;
  for (const LevelSpec& level : levels) {
    if (level.cardinality <= 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "level '%s': cardinality must be positive, got %d", level.name,
          level.cardinality));
    }
    if (level.cardinality > 1 && level.bandwidth_bps <= 0.0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "level '%s': bandwidth is required for levels with more than one "
          "child",
          level.name));
    }
    if (level.latency_s < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("level '%s': latency must be >= 0", level.name));
    }
    count *= level.cardinality;
    if (count > (int64_t{1} << 24)) {
      return absl::InvalidArgumentError("device count too large");
    }
  }
  if (levels.front().cardinality > 1) {
    levels.insert(levels.begin(), LevelSpec{.name = "root", .cardinality = 1});
  }
  return SystemModel(std::move(levels), static_cast<int>(count));
}

std::vector<int> SystemModel::CoordinateOf(int device) const {
  std::vector<int> digits(levels_.size(), 0);
  for (int i = num_levels() - 1; i >= 0; --i) {
    digits[i] = device % levels_[i].cardinality;
    device /= levels_[i].cardinality;
  }
  return digits;
}

int SystemModel::DeviceOf(std::span<const int> digits) const {
  int index = 0;
  for (int i = 0; i < num_levels(); ++i) {
    index = index * levels_[i].cardinality + digits[i];
  }
  return index;
}

namespace {

constexpr double kBytesPerGB = 1e9;

}  // namespace

absl::StatusOr<SystemModel> ParseSystem(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr,
                                             /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("system config: malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("levels") ||
      !doc["levels"].is_array()) {
    return absl::InvalidArgumentError(
        "system config: expected an object with a 'levels' array");
  }
  std::vector<LevelSpec> levels;
  for (const nlohmann::json& entry : doc["levels"]) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry.contains("count") || !entry["count"].is_number_integer()) {
      return absl::InvalidArgumentError(
          "system config: each level needs a 'name' and an integer 'count'");
    }
    LevelSpec level;
    level.name = entry["name"].get<std::string>();
    level.cardinality = entry["count"].get<int>();
    if (entry.contains("bandwidth_GBps")) {
      if (!entry["bandwidth_GBps"].is_number()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "system config: level '%s': bandwidth_GBps must be a number",
            level.name));
      }
      level.bandwidth_bps = entry["bandwidth_GBps"].get<double>() * kBytesPerGB;
    }
    if (entry.contains("latency_s")) {
      if (!entry["latency_s"].is_number()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "system config: level '%s': latency_s must be a number",
            level.name));
      }
      level.latency_s = entry["latency_s"].get<double>();
    }
    for (const auto& [key, value] : entry.items()) {
      if (key != "name" && key != "count" && key != "bandwidth_GBps" &&
          key != "latency_s") {
        return absl::InvalidArgumentError(absl::StrFormat(
            "system config: level '%s': unknown key '%s'", level.name, key));
      }
    }
    levels.push_back(std::move(level));
  }
  return SystemModel::Create(std::move(levels));
}

std::string SerializeSystem(const SystemModel& system) {
  nlohmann::ordered_json doc;
  doc["levels"] = nlohmann::ordered_json::array();
  for (const LevelSpec& level : system.levels()) {
    nlohmann::ordered_json entry;
    entry["name"] = level.name;
    entry["count"] = level.cardinality;
    if (level.bandwidth_bps > 0.0) {
      entry["bandwidth_GBps"] = level.bandwidth_bps / kBytesPerGB;
    }
    if (level.latency_s != 0.0) {
      entry["latency_s"] = level.latency_s;
    }
    doc["levels"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<SystemModel> LoadSystemFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open system config '%s'", path));
  }
  std::ostringstream text;
  text << file.rdbuf();
  return ParseSystem(text.str());
}

}  // namespace redsynth
