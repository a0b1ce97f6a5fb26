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

#include "telefilter/trajectory_log.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace telefilter {

namespace {

using nlohmann::json;

json PositionJson(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }

json QuatJson(const UnitQuaternion& q) {
  return json::array({q.w(), q.x(), q.y(), q.z()});
}

absl::StatusOr<Vec3> ReadPosition(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an array of 3 numbers"));
  }
  for (const auto& v : *it) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(absl::StrCat(key, ": not a number"));
    }
  }
  return MakeVec3((*it)[0].get<double>(), (*it)[1].get<double>(),
                  (*it)[2].get<double>());
}

absl::StatusOr<UnitQuaternion> ReadQuat(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an array of 4 numbers [w,x,y,z]"));
  }
  double c[4];
  for (int i = 0; i < 4; ++i) {
    if (!(*it)[i].is_number()) {
      return absl::InvalidArgumentError(absl::StrCat(key, ": not a number"));
    }
    c[i] = (*it)[i].get<double>();
    if (!std::isfinite(c[i])) {
      return absl::InvalidArgumentError(absl::StrCat(key, ": non-finite"));
    }
  }
  const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] +
                                c[3] * c[3]);
  if (norm < 1e-6) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": zero quaternion"));
  }
  return UnitQuaternion(c[0], c[1], c[2], c[3]);
}

absl::StatusOr<LogSample> ParseSample(const json& j) {
  LogSample s;
  if (!j.contains("t") || !j["t"].is_number()) {
    return absl::InvalidArgumentError("t: missing or not a number");
  }
  s.t = j["t"].get<double>();
  auto cmd_pos = ReadPosition(j, "cmd_pos");
  if (!cmd_pos.ok()) return cmd_pos.status();
  auto cmd_quat = ReadQuat(j, "cmd_quat");
  if (!cmd_quat.ok()) return cmd_quat.status();
  auto exe_pos = ReadPosition(j, "exe_pos");
  if (!exe_pos.ok()) return exe_pos.status();
  auto exe_quat = ReadQuat(j, "exe_quat");
  if (!exe_quat.ok()) return exe_quat.status();
  s.commanded = {*cmd_pos, *cmd_quat};
  s.executed = {*exe_pos, *exe_quat};
  if (j.contains("fault")) {
    if (!j["fault"].is_string()) {
      return absl::InvalidArgumentError("fault: expected a string");
    }
    s.fault = j["fault"].get<std::string>();
  }
  if (j.contains("seq_active") && !j["seq_active"].is_null()) {
    if (!j["seq_active"].is_number_integer()) {
      return absl::InvalidArgumentError("seq_active: expected integer or null");
    }
    s.seq_active = j["seq_active"].get<int64_t>();
  }
  if (j.contains("gripper")) {
    if (!j["gripper"].is_boolean()) {
      return absl::InvalidArgumentError("gripper: expected a boolean");
    }
    s.gripper_closed = j["gripper"].get<bool>();
  }
  return s;
}

}  // namespace

void WriteTrajectoryLog(const TrajectoryLog& log, std::ostream& out) {
  json header = {{"type", "header"},
                 {"format", kTrajectoryLogFormat},
                 {"config_hash", log.config_hash},
                 {"dt", log.dt},
                 {"task", log.task}};
  out << header.dump() << '\n';
  for (const LogSample& s : log.samples) {
    json rec = {{"t", s.t},
                {"cmd_pos", PositionJson(s.commanded.position)},
                {"cmd_quat", QuatJson(s.commanded.orientation)},
                {"exe_pos", PositionJson(s.executed.position)},
                {"exe_quat", QuatJson(s.executed.orientation)},
                {"fault", s.fault},
                {"seq_active", s.seq_active ? json(*s.seq_active) : json()},
                {"gripper", s.gripper_closed}};
    out << rec.dump() << '\n';
  }
}

absl::Status WriteTrajectoryLogFile(const TrajectoryLog& log,
                                    const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path));
  }
  WriteTrajectoryLog(log, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<TrajectoryLog> ReadTrajectoryLog(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": not a JSON object"));
    }
    if (!have_header) {
      if (j.value("type", "") != "header" ||
          j.value("format", "") != kTrajectoryLogFormat) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": expected a ", kTrajectoryLogFormat,
            " header"));
      }
      if (!j.contains("dt") || !j["dt"].is_number() ||
          !(j["dt"].get<double>() > 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": header dt must be > 0"));
      }
      log.dt = j["dt"].get<double>();
      log.config_hash = j.value("config_hash", "");
      log.task = j.value("task", "");
      have_header = true;
      continue;
    }
    auto sample = ParseSample(j);
    if (!sample.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", sample.status().message()));
    }
    log.samples.push_back(*std::move(sample));
  }
  if (!have_header) {
    return absl::InvalidArgumentError("missing trajectory log header");
  }
  return log;
}

absl::StatusOr<TrajectoryLog> ReadTrajectoryLogFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto log = ReadTrajectoryLog(in);
  if (!log.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", log.status().message()));
  }
  return log;
}

absl::Status ValidateUniformTimestamps(const TrajectoryLog& log,
                                       double tolerance) {
  for (size_t k = 1; k < log.samples.size(); ++k) {
    const double step = log.samples[k].t - log.samples[k - 1].t;
    if (!(step > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample ", k, ": timestamps not strictly increasing"));
    }
    if (std::abs(step - log.dt) > tolerance) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample ", k, ": spacing ", step, " differs from dt ", log.dt));
    }
  }
  return absl::OkStatus();
}

}  // namespace telefilter
