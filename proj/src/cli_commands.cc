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

#include "telefilter/cli_commands.h"

#include <filesystem>
#include <fstream>
#include <span>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "telefilter/arm_model.h"
#include "telefilter/config.h"
#include "telefilter/metrics.h"
#include "telefilter/replay.h"
#include "telefilter/synth.h"
#include "telefilter/teleop_server.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {

namespace {

namespace fs = std::filesystem;

absl::StatusOr<GatewayConfig> ConfigOrDefault(const std::string& path) {
  if (!path.empty()) return LoadGatewayConfig(path);
  GatewayConfig config;
  if (absl::Status s = ValidateGatewayConfig(config); !s.ok()) return s;
  return config;
}

void PrintWarnings(const GatewayConfig& config, std::ostream& err) {
  for (const std::string& w : config.warnings) err << "warning: " << w << "\n";
}

absl::Status WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  f << text;
  f.close();
  if (!f) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

int Fail(std::ostream& err, int code, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return code;
}

Pose StartPose(const GatewayConfig& config) {
  return ForwardKinematics(config.controller.dh, config.home);
}

}  // namespace

int RunServe(const ServeArgs& args, const std::atomic<bool>* shutdown,
             std::ostream& out, std::ostream& err) {
  if (args.config_path.empty()) {
    return Fail(err, kExitConfigError,
                absl::InvalidArgumentError("--config is required"));
  }
  auto config = LoadGatewayConfig(args.config_path);
  if (!config.ok()) return Fail(err, kExitConfigError, config.status());
  if (args.port.has_value()) config->server.port = *args.port;
  if (!args.log_path.empty()) config->log_path = args.log_path;
  if (absl::Status s = ValidateGatewayConfig(*config); !s.ok()) {
    return Fail(err, kExitConfigError, s);
  }
  PrintWarnings(*config, err);

  SessionOptions options;
  options.clock =
      args.simulated_clock ? ClockMode::kSimulated : ClockMode::kRealTime;
  options.shutdown = shutdown;
  options.on_listening = [&](uint16_t port) {
    out << "serving ws://" << config->server.address << ":" << port
        << kEndpointPath << " (subprotocol " << kSubprotocol << ", "
        << config->filter.control_frequency_hz << " Hz control, "
        << (args.simulated_clock ? "simulated" : "real-time") << " clock)"
        << std::endl;
  };
  auto log = RunSession(*config, options);
  if (!log.ok()) {
    // Startup failures (bad address, port in use) are configuration errors.
    return Fail(err, kExitConfigError, log.status());
  }
  out << "session ended after " << log->samples.size() << " ticks";
  if (!config->log_path.empty()) out << ", log written to " << config->log_path;
  out << std::endl;
  return kExitOk;
}

int RunReplay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  auto config = ConfigOrDefault(args.config_path);
  if (!config.ok()) return Fail(err, kExitConfigError, config.status());
  PrintWarnings(*config, err);

  auto commands =
      LoadCommandLog(args.command_log, config->filter.command_frequency_hz);
  if (!commands.ok()) return Fail(err, kExitInputError, commands.status());

  ReplayOptions options;
  options.mode = args.raw ? ReplayMode::kRaw : ReplayMode::kFiltered;
  options.task = args.task.empty() ? fs::path(args.command_log).stem().string()
                                   : args.task;
  auto log = Replay(*config, *commands, options);
  if (!log.ok()) return Fail(err, kExitInputError, log.status());

  if (!args.log_out.empty()) {
    if (absl::Status s = WriteTrajectoryLogFile(*log, args.log_out); !s.ok()) {
      return Fail(err, kExitInputError, s);
    }
  }
  auto report = ComputeMetrics(*log, options.task);
  if (!report.ok()) return Fail(err, kExitInputError, report.status());
  const std::span<const MetricsReport> rows(&*report, 1);
  auto table = RenderReportTable(rows, JerkConvention::kSi);
  if (!table.ok()) return Fail(err, kExitInputError, table.status());
  out << *table;
  out << "mode: " << (args.raw ? "raw" : "filtered")
      << "  samples: " << report->sample_count
      << "  faults: " << report->fault_count << "\n";
  if (report->idle_warning) {
    err << "warning: commanded trajectory never moves; time and jerk are "
           "not meaningful\n";
  }
  if (!args.csv_out.empty()) {
    auto csv = RenderReportCsv(rows);
    if (!csv.ok()) return Fail(err, kExitInputError, csv.status());
    if (absl::Status s = WriteTextFile(args.csv_out, *csv); !s.ok()) {
      return Fail(err, kExitInputError, s);
    }
  }
  if (args.strict && report->fault_count > 0) {
    for (const LogSample& s : log->samples) {
      if (s.faulted()) {
        err << "fault at t=" << s.t << ": " << s.fault << "\n";
        break;
      }
    }
    return kExitStrictFault;
  }
  return kExitOk;
}

int RunSynth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  auto config = ConfigOrDefault(args.config_path);
  if (!config.ok()) return Fail(err, kExitConfigError, config.status());
  const double f = config->filter.command_frequency_hz;
  const Pose start = StartPose(*config);

  std::vector<std::pair<SyntheticTraceSpec, std::string>> jobs;
  if (!args.corpus_dir.empty()) {
    std::error_code ec;
    fs::create_directories(args.corpus_dir, ec);
    if (ec) {
      return Fail(err, kExitInputError,
                  absl::UnavailableError(absl::StrCat(
                      "cannot create ", args.corpus_dir, ": ", ec.message())));
    }
    for (const SyntheticTraceSpec& spec : BundledJitteryCorpus()) {
      jobs.emplace_back(
          spec, (fs::path(args.corpus_dir) /
                 absl::StrCat("pick_place_", spec.seed, ".jsonl"))
                    .string());
    }
  } else {
    if (args.out.empty()) {
      return Fail(err, kExitInputError,
                  absl::InvalidArgumentError("--out or --corpus is required"));
    }
    auto kind = ParseTraceKind(args.kind);
    if (!kind.ok()) return Fail(err, kExitInputError, kind.status());
    SyntheticTraceSpec spec;
    spec.kind = *kind;
    spec.duration_s = args.duration_s;
    spec.amplitude_m = args.amplitude_m;
    spec.jitter_std_m = args.jitter_std_m;
    spec.seed = args.seed;
    jobs.emplace_back(spec, args.out);
  }

  for (const auto& [spec, path] : jobs) {
    auto samples = GenerateTrace(spec, start, f);
    if (!samples.ok()) return Fail(err, kExitInputError, samples.status());
    if (absl::Status s =
            WriteTextFile(path, SerializeTargetLog(spec, f, *samples));
        !s.ok()) {
      return Fail(err, kExitInputError, s);
    }
    out << "wrote " << samples->size() << " targets to " << path << "\n";
  }
  return kExitOk;
}

int RunReport(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  if (args.logs.empty()) {
    return Fail(err, kExitInputError,
                absl::InvalidArgumentError("at least one log is required"));
  }
  JerkConvention convention;
  if (args.convention == "si") {
    convention = JerkConvention::kSi;
  } else if (args.convention == "per-sample") {
    convention = JerkConvention::kPerSample;
  } else {
    return Fail(err, kExitInputError,
                absl::InvalidArgumentError(absl::StrCat(
                    "--convention: expected si or per-sample, got '",
                    args.convention, "'")));
  }
  if (!args.plot_dir.empty()) {
    std::error_code ec;
    fs::create_directories(args.plot_dir, ec);
    if (ec) {
      return Fail(err, kExitInputError,
                  absl::UnavailableError(absl::StrCat(
                      "cannot create ", args.plot_dir, ": ", ec.message())));
    }
  }

  std::vector<MetricsReport> reports;
  for (const std::string& path : args.logs) {
    auto log = ReadTrajectoryLogFile(path);
    if (!log.ok()) return Fail(err, kExitInputError, log.status());
    const std::string stem = fs::path(path).stem().string();
    const std::string name = log->task.empty() ? stem : log->task;
    auto report = ComputeMetrics(*log, name);
    if (!report.ok()) {
      return Fail(err, kExitInputError,
                  absl::Status(report.status().code(),
                               absl::StrCat(path, ": ",
                                            report.status().message())));
    }
    if (report->idle_warning) {
      err << "warning: " << path << ": commanded trajectory never moves\n";
    }
    reports.push_back(*std::move(report));
    if (!args.plot_dir.empty()) {
      auto plot = ExportPlotData(*log);
      if (!plot.ok()) return Fail(err, kExitInputError, plot.status());
      const std::string plot_path =
          (fs::path(args.plot_dir) / absl::StrCat(stem, ".plot.csv")).string();
      if (absl::Status s = WriteTextFile(plot_path, *plot); !s.ok()) {
        return Fail(err, kExitInputError, s);
      }
    }
  }
  auto table = RenderReportTable(reports, convention);
  if (!table.ok()) return Fail(err, kExitInputError, table.status());
  out << *table;
  if (!args.csv_out.empty()) {
    auto csv = RenderReportCsv(reports);
    if (!csv.ok()) return Fail(err, kExitInputError, csv.status());
    if (absl::Status s = WriteTextFile(args.csv_out, *csv); !s.ok()) {
      return Fail(err, kExitInputError, s);
    }
  }
  return kExitOk;
}

}  // namespace telefilter
