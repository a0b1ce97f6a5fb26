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

#include "telefilter/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <openssl/evp.h>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace telefilter {

namespace {

using nlohmann::json;

absl::Status FieldError(const std::string& field, const std::string& message) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", message));
}

absl::Status Prefixed(const std::string& prefix, const absl::Status& status) {
  if (status.ok()) return status;
  return absl::Status(status.code(), absl::StrCat(prefix, status.message()));
}

absl::Status CheckKeys(const json& obj, const std::string& path,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) return FieldError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      return FieldError(path.empty() ? key : absl::StrCat(path, ".", key),
                        "unknown field");
    }
  }
  return absl::OkStatus();
}

absl::Status ReadDouble(const json& obj, const std::string& key,
                        const std::string& path, double* out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return absl::OkStatus();
  if (!it->is_number()) {
    return FieldError(absl::StrCat(path, ".", key), "expected a number");
  }
  *out = it->get<double>();
  if (!std::isfinite(*out)) {
    return FieldError(absl::StrCat(path, ".", key), "must be finite");
  }
  return absl::OkStatus();
}

absl::Status ReadInt(const json& obj, const std::string& key,
                     const std::string& path, int* out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return absl::OkStatus();
  if (!it->is_number_integer()) {
    return FieldError(absl::StrCat(path, ".", key), "expected an integer");
  }
  *out = it->get<int>();
  return absl::OkStatus();
}

template <int N>
absl::Status ReadFixedArray(const json& value, const std::string& path,
                            Eigen::Matrix<double, N, 1>* out) {
  if (!value.is_array() || value.size() != N) {
    return FieldError(path, absl::StrCat("expected an array of ", N,
                                         " numbers"));
  }
  for (int i = 0; i < N; ++i) {
    if (!value[i].is_number() || !std::isfinite(value[i].get<double>())) {
      return FieldError(absl::StrCat(path, "[", i, "]"),
                        "expected a finite number");
    }
    (*out)[i] = value[i].get<double>();
  }
  return absl::OkStatus();
}

#define TF_RETURN_IF_ERROR(expr)         \
  do {                                   \
    if (absl::Status _s = (expr); !_s.ok()) return _s; \
  } while (0)

absl::Status ParseFilter(const json& j, FilterParams* f) {
  TF_RETURN_IF_ERROR(CheckKeys(
      j, "filter",
      {"command_frequency_hz", "control_frequency_hz", "max_position_speed_m",
       "max_orientation_speed_rad", "noise_position_threshold_m",
       "noise_orientation_threshold_rad"}));
  TF_RETURN_IF_ERROR(
      ReadDouble(j, "command_frequency_hz", "filter", &f->command_frequency_hz));
  TF_RETURN_IF_ERROR(
      ReadDouble(j, "control_frequency_hz", "filter", &f->control_frequency_hz));
  TF_RETURN_IF_ERROR(
      ReadDouble(j, "max_position_speed_m", "filter", &f->max_position_speed_m));
  TF_RETURN_IF_ERROR(ReadDouble(j, "max_orientation_speed_rad", "filter",
                                &f->max_orientation_speed_rad));
  TF_RETURN_IF_ERROR(ReadDouble(j, "noise_position_threshold_m", "filter",
                                &f->noise_position_threshold_m));
  TF_RETURN_IF_ERROR(ReadDouble(j, "noise_orientation_threshold_rad", "filter",
                                &f->noise_orientation_threshold_rad));
  return absl::OkStatus();
}

absl::Status ParseArm(const json& j, GatewayConfig* c) {
  TF_RETURN_IF_ERROR(
      CheckKeys(j, "arm", {"dh", "limits", "damping", "home"}));
  if (j.contains("dh")) {
    const json& dh = j["dh"];
    if (!dh.is_array() || dh.size() != kNumJoints) {
      return FieldError("arm.dh", "expected an array of 6 DH rows");
    }
    for (int i = 0; i < kNumJoints; ++i) {
      const std::string path = absl::StrCat("arm.dh[", i, "]");
      TF_RETURN_IF_ERROR(
          CheckKeys(dh[i], path, {"a", "alpha", "d", "theta_offset"}));
      DHLink& l = c->controller.dh[i];
      TF_RETURN_IF_ERROR(ReadDouble(dh[i], "a", path, &l.a));
      TF_RETURN_IF_ERROR(ReadDouble(dh[i], "alpha", path, &l.alpha));
      TF_RETURN_IF_ERROR(ReadDouble(dh[i], "d", path, &l.d));
      TF_RETURN_IF_ERROR(ReadDouble(dh[i], "theta_offset", path, &l.theta_offset));
    }
  }
  if (j.contains("limits")) {
    const json& lim = j["limits"];
    if (!lim.is_array() || lim.size() != kNumJoints) {
      return FieldError("arm.limits", "expected an array of 6 joint limits");
    }
    for (int i = 0; i < kNumJoints; ++i) {
      const std::string path = absl::StrCat("arm.limits[", i, "]");
      TF_RETURN_IF_ERROR(CheckKeys(lim[i], path, {"q_min", "q_max", "v_max"}));
      JointLimit& l = c->controller.limits[i];
      TF_RETURN_IF_ERROR(ReadDouble(lim[i], "q_min", path, &l.q_min));
      TF_RETURN_IF_ERROR(ReadDouble(lim[i], "q_max", path, &l.q_max));
      TF_RETURN_IF_ERROR(ReadDouble(lim[i], "v_max", path, &l.v_max));
    }
  }
  TF_RETURN_IF_ERROR(ReadDouble(j, "damping", "arm", &c->controller.damping));
  if (j.contains("home")) {
    TF_RETURN_IF_ERROR(ReadFixedArray<kNumJoints>(j["home"], "arm.home", &c->home));
  }
  return absl::OkStatus();
}

absl::Status ParseStiffness(const json& j, StiffnessParams* s) {
  TF_RETURN_IF_ERROR(CheckKeys(j, "stiffness", {"enabled", "diagonal"}));
  if (j.contains("enabled")) {
    if (!j["enabled"].is_boolean()) {
      return FieldError("stiffness.enabled", "expected a boolean");
    }
    s->enabled = j["enabled"].get<bool>();
  }
  if (j.contains("diagonal")) {
    TF_RETURN_IF_ERROR(
        ReadFixedArray<6>(j["diagonal"], "stiffness.diagonal", &s->diagonal));
  }
  return absl::OkStatus();
}

absl::Status ParseServer(const json& j, ServerOptions* s) {
  TF_RETURN_IF_ERROR(
      CheckKeys(j, "server", {"address", "port", "telemetry_decimation"}));
  if (j.contains("address")) {
    if (!j["address"].is_string()) {
      return FieldError("server.address", "expected a string");
    }
    s->address = j["address"].get<std::string>();
  }
  TF_RETURN_IF_ERROR(ReadInt(j, "port", "server", &s->port));
  TF_RETURN_IF_ERROR(
      ReadInt(j, "telemetry_decimation", "server", &s->telemetry_decimation));
  return absl::OkStatus();
}

absl::StatusOr<WrenchSchedule> WrenchScheduleFromJson(const json& j) {
  if (!j.is_array()) return FieldError("wrench_schedule", "expected a list");
  WrenchSchedule schedule;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string path = absl::StrCat("wrench_schedule[", i, "]");
    TF_RETURN_IF_ERROR(CheckKeys(j[i], path, {"start_s", "end_s", "wrench"}));
    if (!j[i].contains("start_s") || !j[i].contains("end_s") ||
        !j[i].contains("wrench")) {
      return FieldError(path, "needs start_s, end_s and wrench");
    }
    WrenchSegment seg;
    TF_RETURN_IF_ERROR(ReadDouble(j[i], "start_s", path, &seg.start_s));
    TF_RETURN_IF_ERROR(ReadDouble(j[i], "end_s", path, &seg.end_s));
    if (!(seg.start_s < seg.end_s)) {
      return FieldError(path, "start_s must be < end_s");
    }
    TF_RETURN_IF_ERROR(
        ReadFixedArray<6>(j[i]["wrench"], path + ".wrench", &seg.wrench));
    schedule.push_back(seg);
  }
  return schedule;
}

std::string ReadFile(const std::string& path, bool* ok) {
  std::ifstream in(path, std::ios::binary);
  *ok = static_cast<bool>(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

absl::Status ValidateGatewayConfig(GatewayConfig& config) {
  config.warnings.clear();
  std::vector<std::string> filter_warnings;
  TF_RETURN_IF_ERROR(Prefixed(
      "filter.", ValidateFilterParams(config.filter, &filter_warnings)));
  for (auto& w : filter_warnings) {
    config.warnings.push_back(absl::StrCat("filter.", w));
  }
  TF_RETURN_IF_ERROR(ValidateControllerConfig(config.controller));
  if (auto joint = FirstLimitViolation(config.controller.limits, config.home)) {
    return FieldError(absl::StrCat("arm.home[", *joint, "]"),
                      "outside joint limits");
  }
  if (config.server.port < 0 || config.server.port > 65535) {
    return FieldError("server.port", "must be in [0, 65535]");
  }
  if (config.server.telemetry_decimation < 1) {
    return FieldError("server.telemetry_decimation", "must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<WrenchSchedule> ParseWrenchSchedule(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError("wrench schedule: invalid JSON");
  }
  return WrenchScheduleFromJson(j);
}

absl::StatusOr<GatewayConfig> ParseGatewayConfig(std::string_view json_text,
                                                 const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(e.what());
  }
  GatewayConfig c;
  TF_RETURN_IF_ERROR(CheckKeys(j, "",
                               {"filter", "arm", "stiffness", "controller",
                                "server", "log_path", "wrench_schedule"}));
  if (j.contains("filter")) TF_RETURN_IF_ERROR(ParseFilter(j["filter"], &c.filter));
  if (j.contains("arm")) TF_RETURN_IF_ERROR(ParseArm(j["arm"], &c));
  if (j.contains("stiffness")) {
    TF_RETURN_IF_ERROR(ParseStiffness(j["stiffness"], &c.controller.stiffness));
  }
  if (j.contains("controller")) {
    const json& ctl = j["controller"];
    TF_RETURN_IF_ERROR(CheckKeys(
        ctl, "controller",
        {"tracking_residual_bound_m", "tracking_residual_steps"}));
    TF_RETURN_IF_ERROR(ReadDouble(ctl, "tracking_residual_bound_m",
                                  "controller",
                                  &c.controller.tracking_residual_bound_m));
    TF_RETURN_IF_ERROR(ReadInt(ctl, "tracking_residual_steps", "controller",
                               &c.controller.tracking_residual_steps));
  }
  if (j.contains("server")) TF_RETURN_IF_ERROR(ParseServer(j["server"], &c.server));
  if (j.contains("log_path")) {
    if (!j["log_path"].is_string()) {
      return FieldError("log_path", "expected a string");
    }
    c.log_path = j["log_path"].get<std::string>();
  }
  if (j.contains("wrench_schedule")) {
    const json& ws = j["wrench_schedule"];
    absl::StatusOr<WrenchSchedule> schedule;
    if (ws.is_string()) {
      std::filesystem::path p(ws.get<std::string>());
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      bool ok = false;
      const std::string text = ReadFile(p.string(), &ok);
      if (!ok) {
        return FieldError("wrench_schedule",
                          absl::StrCat("cannot open ", p.string()));
      }
      schedule = ParseWrenchSchedule(text);
    } else {
      schedule = WrenchScheduleFromJson(ws);
    }
    if (!schedule.ok()) return schedule.status();
    c.wrench_schedule = *std::move(schedule);
  }
  TF_RETURN_IF_ERROR(ValidateGatewayConfig(c));
  return c;
}

absl::StatusOr<GatewayConfig> LoadGatewayConfig(const std::string& path) {
  bool ok = false;
  const std::string text = ReadFile(path, &ok);
  if (!ok) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  const std::string dir = std::filesystem::path(path).parent_path().string();
  auto config = ParseGatewayConfig(text, dir);
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

std::string CanonicalConfigJson(const GatewayConfig& c) {
  json dh = json::array(), limits = json::array();
  for (const DHLink& l : c.controller.dh) {
    dh.push_back({{"a", l.a}, {"alpha", l.alpha}, {"d", l.d},
                  {"theta_offset", l.theta_offset}});
  }
  for (const JointLimit& l : c.controller.limits) {
    limits.push_back({{"q_min", l.q_min}, {"q_max", l.q_max}, {"v_max", l.v_max}});
  }
  json wrench = json::array();
  for (const WrenchSegment& s : c.wrench_schedule) {
    wrench.push_back({{"start_s", s.start_s},
                      {"end_s", s.end_s},
                      {"wrench", std::vector<double>(s.wrench.data(),
                                                     s.wrench.data() + 6)}});
  }
  const auto& st = c.controller.stiffness;
  json j = {
      {"filter",
       {{"command_frequency_hz", c.filter.command_frequency_hz},
        {"control_frequency_hz", c.filter.control_frequency_hz},
        {"max_position_speed_m", c.filter.max_position_speed_m},
        {"max_orientation_speed_rad", c.filter.max_orientation_speed_rad},
        {"noise_position_threshold_m", c.filter.noise_position_threshold_m},
        {"noise_orientation_threshold_rad",
         c.filter.noise_orientation_threshold_rad}}},
      {"arm",
       {{"dh", dh},
        {"limits", limits},
        {"damping", c.controller.damping},
        {"home", std::vector<double>(c.home.data(), c.home.data() + kNumJoints)}}},
      {"stiffness",
       {{"enabled", st.enabled},
        {"diagonal",
         std::vector<double>(st.diagonal.data(), st.diagonal.data() + 6)}}},
      {"controller",
       {{"tracking_residual_bound_m", c.controller.tracking_residual_bound_m},
        {"tracking_residual_steps", c.controller.tracking_residual_steps}}},
      {"wrench_schedule", wrench},
      {"bypass_filter", c.bypass_filter},
  };
  return j.dump();
}

std::string ConfigHash(const GatewayConfig& config) {
  const std::string text = CanonicalConfigJson(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return absl::StrCat("sha256:", hex);
}

}  // namespace telefilter
