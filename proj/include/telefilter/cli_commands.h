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

#ifndef TELEFILTER_CLI_COMMANDS_H_
#define TELEFILTER_CLI_COMMANDS_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace telefilter {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitInputError = 3,
  kExitStrictFault = 4,
};

struct ServeArgs {
  std::string config_path;
  std::optional<int> port;
  std::string log_path;  // overrides the config's log_path when set
  bool simulated_clock = false;
};

struct ReplayArgs {
  std::string config_path;  // empty: built-in defaults
  std::string command_log;
  bool raw = false;
  bool strict = false;
  std::string log_out;
  std::string csv_out;
  std::string task;  // defaults to the command log's file stem
};

struct SynthArgs {
  std::string config_path;
  std::string kind = "jittery-pick-place";
  double duration_s = 30.0;
  double amplitude_m = 0.15;
  double jitter_std_m = 0.002;
  uint64_t seed = 42;
  std::string out;
  std::string corpus_dir;  // writes the bundled corpus instead of one trace
};

struct ReportArgs {
  std::vector<std::string> logs;
  std::string csv_out;
  std::string plot_dir;
  std::string convention = "si";  // si | per-sample
};

int RunServe(const ServeArgs& args, const std::atomic<bool>* shutdown,
             std::ostream& out, std::ostream& err);
int RunReplay(const ReplayArgs& args, std::ostream& out, std::ostream& err);
int RunSynth(const SynthArgs& args, std::ostream& out, std::ostream& err);
int RunReport(const ReportArgs& args, std::ostream& out, std::ostream& err);

}  // namespace telefilter

#endif  // TELEFILTER_CLI_COMMANDS_H_
