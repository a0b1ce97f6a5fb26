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

#include <atomic>
#include <csignal>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "telefilter/cli_commands.h"

namespace {

std::atomic<bool> g_shutdown{false};

extern "C" void OnSignal(int) { g_shutdown.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"telefilter: filtered teleoperation command gateway"};
  app.require_subcommand(1);

  telefilter::ServeArgs serve;
  CLI::App* serve_cmd =
      app.add_subcommand("serve", "Run the websocket gateway until SIGINT");
  serve_cmd->add_option("--config", serve.config_path, "Config JSON path")
      ->required();
  serve_cmd->add_option("--port", serve.port,
                        "Override server.port (0 = ephemeral)");
  serve_cmd->add_option("--log", serve.log_path,
                        "Write the trajectory log here on exit");
  serve_cmd->add_flag("--simulated-clock", serve.simulated_clock,
                      "Advance only on step messages from the operator");

  telefilter::ReplayArgs replay;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "Replay a command log against the simulator");
  replay_cmd->add_option("command_log", replay.command_log, "Command log")
      ->required();
  replay_cmd->add_option("--config", replay.config_path, "Config JSON path");
  auto* raw = replay_cmd->add_flag("--raw", replay.raw,
                                   "Interpolate without the noise gate and "
                                   "speed cap");
  replay_cmd->add_flag("--filtered", "Full filter pipeline (default)")
      ->excludes(raw);
  replay_cmd->add_flag("--strict", replay.strict,
                       "Exit with code 4 if any fault was recorded");
  replay_cmd->add_option("--log", replay.log_out, "Trajectory log output");
  replay_cmd->add_option("--csv", replay.csv_out, "Metrics CSV output");
  replay_cmd->add_option("--task", replay.task, "Task name for the report");

  telefilter::SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic operator trace");
  synth_cmd->add_option("--kind", synth.kind,
                        "line | arc | jittery-pick-place | noise-hold")
      ->capture_default_str();
  synth_cmd->add_option("--duration", synth.duration_s, "Seconds")
      ->capture_default_str();
  synth_cmd->add_option("--amplitude", synth.amplitude_m, "Meters")
      ->capture_default_str();
  synth_cmd->add_option("--jitter", synth.jitter_std_m,
                        "Hand jitter std, meters")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")
      ->capture_default_str();
  auto* out = synth_cmd->add_option("--out", synth.out, "Output path");
  synth_cmd
      ->add_option("--corpus", synth.corpus_dir,
                   "Write the bundled 10-trace jittery corpus to this "
                   "directory")
      ->excludes(out);
  synth_cmd->add_option("--config", synth.config_path,
                        "Config JSON (sets f and the start pose)");

  telefilter::ReportArgs report;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Compute metrics for trajectory logs");
  report_cmd->add_option("logs", report.logs, "Trajectory logs")->required();
  report_cmd->add_option("--csv", report.csv_out, "Metrics CSV output");
  report_cmd->add_option("--plot-dir", report.plot_dir,
                         "Directory for per-log plot CSVs");
  report_cmd
      ->add_option("--convention", report.convention,
                   "Jerk columns in the table: si | per-sample")
      ->check(CLI::IsMember({"si", "per-sample"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : telefilter::kExitInputError;
  }

  if (*serve_cmd) {
    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    return telefilter::RunServe(serve, &g_shutdown, std::cout, std::cerr);
  }
  if (*replay_cmd) return telefilter::RunReplay(replay, std::cout, std::cerr);
  if (*synth_cmd) return telefilter::RunSynth(synth, std::cout, std::cerr);
  return telefilter::RunReport(report, std::cout, std::cerr);
}
