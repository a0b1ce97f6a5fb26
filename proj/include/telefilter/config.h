// Copyright 2026 The Telefilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TELEFILTER_CONFIG_H_
#define TELEFILTER_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "telefilter/arm_model.h"
#include "telefilter/command_filter.h"
#include "telefilter/controller_sim.h"

namespace telefilter {

struct ServerOptions {
  std::string address = "127.0.0.1";
  int port = 8765;  // 0 picks an ephemeral port
  int telemetry_decimation = 1;
};

// Everything the gateway needs. Every field has a default, so an empty JSON
// object is a valid config file.
struct GatewayConfig {
  FilterParams filter;
  ControllerConfig controller;
  JointVector home = DefaultHome();
  ServerOptions server;
  std::string log_path;
  WrenchSchedule wrench_schedule;
  // Runtime switch for unfiltered replays; never read from a file.
  bool bypass_filter = false;
  // Non-fatal findings from validation (e.g. non-integer f'/f).
  std::vector<std::string> warnings;
};

// Errors are prefixed with the offending field path, e.g.
// "filter.control_frequency_hz: must be greater than ...".
absl::Status ValidateGatewayConfig(GatewayConfig& config);

// `base_dir` resolves a relative "wrench_schedule" file reference.
absl::StatusOr<GatewayConfig> ParseGatewayConfig(std::string_view json_text,
                                                 const std::string& base_dir);
absl::StatusOr<GatewayConfig> LoadGatewayConfig(const std::string& path);

// JSON list of {"start_s", "end_s", "wrench": [fx,fy,fz,tx,ty,tz]}.
absl::StatusOr<WrenchSchedule> ParseWrenchSchedule(std::string_view json_text);

// Canonical JSON of the effective configuration (sorted keys) and its
// SHA-256, recorded in trajectory log headers.
std::string CanonicalConfigJson(const GatewayConfig& config);
std::string ConfigHash(const GatewayConfig& config);

}  // namespace telefilter

#endif  // TELEFILTER_CONFIG_H_
