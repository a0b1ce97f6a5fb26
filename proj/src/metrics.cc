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

#include "telefilter/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace telefilter {

namespace {

constexpr char kCsvHeader[] =
    "task,time_s,rms_mm,commanded_jerk,executed_jerk,"
    "commanded_jerk_per_sample,executed_jerk_per_sample,"
    "orientation_error_rad,sample_count,fault_count,idle_warning";
constexpr int kCsvColumns = 11;

// Shortest representation that parses back to the same double.
std::string RoundTrip(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 records; tolerates LF-only line endings.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) return absl::InvalidArgumentError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

template <typename T>
absl::StatusOr<T> ParseNumber(const std::string& s, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(column, ": cannot parse '", s, "'"));
  }
  return value;
}

absl::StatusOr<double> JerkOf(std::span<const Vec3> p, double scale) {
  if (p.size() < 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("jerk needs at least 4 samples, got ", p.size()));
  }
  double sum = 0.0;
  for (size_t k = 0; k + 3 < p.size(); ++k) {
    sum += ((p[k + 3] - p[k]) - 3.0 * (p[k + 2] - p[k + 1])).norm();
  }
  return sum / static_cast<double>(p.size() - 3) * scale;
}

}  // namespace

absl::StatusOr<double> RmsErrorMm(const TrajectoryLog& log) {
  if (log.samples.empty()) {
    return absl::InvalidArgumentError("rms of an empty log");
  }
  double sum = 0.0;
  for (const LogSample& s : log.samples) {
    sum += (s.commanded.position - s.executed.position).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(log.samples.size())) * 1000.0;
}

absl::StatusOr<double> AverageJerkNorm(std::span<const Vec3> positions,
                                       double dt) {
  if (!(dt > 0.0)) return absl::InvalidArgumentError("dt must be > 0");
  return JerkOf(positions, 1.0 / (dt * dt * dt));
}

absl::StatusOr<double> AverageJerkNormPerSample(
    std::span<const Vec3> positions) {
  return JerkOf(positions, 1.0);
}

absl::StatusOr<CompletionTime> ComputeCompletionTime(const TrajectoryLog& log) {
  if (log.samples.empty()) {
    return absl::InvalidArgumentError("completion time of an empty log");
  }
  std::optional<size_t> first, last;
  for (size_t k = 1; k < log.samples.size(); ++k) {
    const double moved = (log.samples[k].commanded.position -
                          log.samples[k - 1].commanded.position)
                             .norm();
    if (moved > kIdleMotionThresholdM) {
      if (!first) first = k - 1;
      last = k;
    }
  }
  CompletionTime out;
  if (!first) {
    out.all_idle = true;
    return out;
  }
  out.first_active = *first;
  out.seconds = log.samples[*last].t - log.samples[*first].t;
  return out;
}

absl::StatusOr<double> MeanOrientationErrorRad(const TrajectoryLog& log) {
  if (log.samples.empty()) {
    return absl::InvalidArgumentError("orientation error of an empty log");
  }
  double sum = 0.0;
  for (const LogSample& s : log.samples) {
    sum += AngularDistance(s.commanded.orientation, s.executed.orientation);
  }
  return sum / static_cast<double>(log.samples.size());
}

std::vector<Vec3> CommandedPositions(const TrajectoryLog& log) {
  std::vector<Vec3> out;
  out.reserve(log.samples.size());
  for (const LogSample& s : log.samples) out.push_back(s.commanded.position);
  return out;
}

std::vector<Vec3> ExecutedPositions(const TrajectoryLog& log) {
  std::vector<Vec3> out;
  out.reserve(log.samples.size());
  for (const LogSample& s : log.samples) out.push_back(s.executed.position);
  return out;
}

int CountFaults(const TrajectoryLog& log) {
  int count = 0;
  bool previous = false;
  for (const LogSample& s : log.samples) {
    if (s.faulted() && !previous) ++count;
    previous = s.faulted();
  }
  return count;
}

absl::StatusOr<MetricsReport> ComputeMetrics(const TrajectoryLog& log,
                                             std::string task_name) {
  MetricsReport r;
  r.task_name = std::move(task_name);
  r.sample_count = static_cast<int>(log.samples.size());
  r.fault_count = CountFaults(log);
  if (log.samples.empty()) {
    r.idle_warning = true;
    return r;
  }
  auto rms = RmsErrorMm(log);
  if (!rms.ok()) return rms.status();
  r.rms_mm = *rms;
  auto time = ComputeCompletionTime(log);
  if (!time.ok()) return time.status();
  r.time_s = time->seconds;
  r.idle_warning = time->all_idle;
  auto ori = MeanOrientationErrorRad(log);
  if (!ori.ok()) return ori.status();
  r.orientation_error_rad = *ori;

  if (log.samples.size() >= 4) {
    const std::vector<Vec3> cmd = CommandedPositions(log);
    const std::vector<Vec3> exe = ExecutedPositions(log);
    r.commanded_jerk = *AverageJerkNorm(cmd, log.dt);
    r.executed_jerk = *AverageJerkNorm(exe, log.dt);
    r.commanded_jerk_per_sample = *AverageJerkNormPerSample(cmd);
    r.executed_jerk_per_sample = *AverageJerkNormPerSample(exe);
  }
  return r;
}

std::string FormatDecimals(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string FormatSignificant(double value) {
  if (value == 0.0 || !std::isfinite(value)) return RoundTrip(value);
  const int magnitude =
      static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = std::max(0, 2 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

absl::StatusOr<std::string> RenderReportTable(
    std::span<const MetricsReport> reports, JerkConvention convention) {
  if (reports.empty()) {
    return absl::InvalidArgumentError("no reports to render");
  }
  const std::vector<std::string> header = {"Task", "Time (s)", "RMS (mm)",
                                           "Comm. Jerk", "Exe. Jerk"};
  std::vector<std::vector<std::string>> rows;
  for (const MetricsReport& r : reports) {
    if (r.task_name.empty()) {
      return absl::InvalidArgumentError("report with empty task name");
    }
    const bool si = convention == JerkConvention::kSi;
    rows.push_back(
        {r.task_name, FormatDecimals(r.time_s), FormatDecimals(r.rms_mm),
         FormatSignificant(si ? r.commanded_jerk : r.commanded_jerk_per_sample),
         FormatSignificant(si ? r.executed_jerk : r.executed_jerk_per_sample)});
  }
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto render_row = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += " | ";
      line += cells[c];
      if (c + 1 < cells.size()) line.append(width[c] - cells[c].size(), ' ');
    }
    return line + "\n";
  };
  std::string out = render_row(header);
  for (size_t c = 0; c < width.size(); ++c) {
    if (c > 0) out += "-+-";
    out.append(width[c], '-');
  }
  out += "\n";
  for (const auto& row : rows) out += render_row(row);
  out += convention == JerkConvention::kSi
             ? "Jerk: mean norm of third difference / dt^3 (m/s^3)\n"
             : "Jerk: mean norm of third difference per sample (m)\n";
  return out;
}

absl::StatusOr<std::string> RenderReportCsv(
    std::span<const MetricsReport> reports) {
  std::string out = absl::StrCat(kCsvHeader, "\r\n");
  for (const MetricsReport& r : reports) {
    if (r.task_name.empty()) {
      return absl::InvalidArgumentError("report with empty task name");
    }
    out += absl::StrJoin(
        {CsvField(r.task_name), RoundTrip(r.time_s), RoundTrip(r.rms_mm),
         RoundTrip(r.commanded_jerk), RoundTrip(r.executed_jerk),
         RoundTrip(r.commanded_jerk_per_sample),
         RoundTrip(r.executed_jerk_per_sample),
         RoundTrip(r.orientation_error_rad), absl::StrCat(r.sample_count),
         absl::StrCat(r.fault_count),
         std::string(r.idle_warning ? "1" : "0")},
        ",");
    out += "\r\n";
  }
  return out;
}

absl::StatusOr<std::vector<MetricsReport>> ParseReportCsv(
    std::string_view csv) {
  auto records = ParseCsvRecords(csv);
  if (!records.ok()) return records.status();
  if (records->empty() ||
      absl::StrJoin((*records)[0], ",") != std::string_view(kCsvHeader)) {
    return absl::InvalidArgumentError("missing or unexpected CSV header");
  }
  std::vector<MetricsReport> out;
  for (size_t i = 1; i < records->size(); ++i) {
    const auto& f = (*records)[i];
    if (f.size() != kCsvColumns) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, ": expected ", kCsvColumns, " fields, got ",
                       f.size()));
    }
    MetricsReport r;
    r.task_name = f[0];
    double* doubles[] = {&r.time_s,
                         &r.rms_mm,
                         &r.commanded_jerk,
                         &r.executed_jerk,
                         &r.commanded_jerk_per_sample,
                         &r.executed_jerk_per_sample,
                         &r.orientation_error_rad};
    for (int c = 0; c < 7; ++c) {
      auto v = ParseNumber<double>(f[c + 1], "value");
      if (!v.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", i, ": ", v.status().message()));
      }
      *doubles[c] = *v;
    }
    auto samples = ParseNumber<int>(f[8], "sample_count");
    auto faults = ParseNumber<int>(f[9], "fault_count");
    if (!samples.ok()) return samples.status();
    if (!faults.ok()) return faults.status();
    r.sample_count = *samples;
    r.fault_count = *faults;
    r.idle_warning = f[10] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

absl::StatusOr<std::string> ExportPlotData(const TrajectoryLog& log) {
  auto time = ComputeCompletionTime(log);
  if (!time.ok()) return time.status();
  auto row = [](const char* kind, const LogSample& s) {
    const Vec3& c = s.commanded.position;
    const Vec3& e = s.executed.position;
    return absl::StrCat(kind, ",", RoundTrip(s.t), ",", RoundTrip(c.x()), ",",
                        RoundTrip(c.y()), ",", RoundTrip(c.z()), ",",
                        RoundTrip(e.x()), ",", RoundTrip(e.y()), ",",
                        RoundTrip(e.z()), "\r\n");
  };
  std::string out = "kind,t,cmd_x,cmd_y,cmd_z,exe_x,exe_y,exe_z\r\n";
  out += row("start", log.samples[time->first_active]);
  for (const LogSample& s : log.samples) out += row("sample", s);
  return out;
}

}  // namespace telefilter
