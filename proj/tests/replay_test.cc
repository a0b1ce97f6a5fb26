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

#include "telefilter/replay.h"

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "telefilter/arm_model.h"
#include "telefilter/metrics.h"
#include "telefilter/synth.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {
namespace {

GatewayConfig Config() {
  GatewayConfig config;
  EXPECT_TRUE(ValidateGatewayConfig(config).ok());
  return config;
}

std::vector<ScriptedCommand> Trace(const SyntheticTraceSpec& spec) {
  const GatewayConfig config = Config();
  auto samples = GenerateTrace(
      spec, ForwardKinematics(config.controller.dh, config.home),
      config.filter.command_frequency_hz);
  EXPECT_TRUE(samples.ok()) << samples.status();
  return CommandsFromTrace(*samples);
}

TrajectoryLog ReplayWith(const std::vector<ScriptedCommand>& commands,
                         ReplayMode mode) {
  auto log = Replay(Config(), commands, {.mode = mode, .task = "t"});
  EXPECT_TRUE(log.ok()) << log.status();
  return *std::move(log);
}

TEST(ParseCommandLogTest, ReadsAllLineKinds) {
  std::istringstream in(
      R"({"type":"header","format":"telefilter.commands.v1"})"
      "\n"
      R"({"type":"delta_pose","seq":3,"translation":[0.001,0,0],)"
      R"("rotation":[0,0,0.01],"client_time_ms":5})"
      "\n\n"
      R"({"type":"target","t":0.1,"position":[0.3,0,0.4],)"
      R"("quaternion":[1,0,0,0],"gripper":true})"
      "\n"
      R"({"type":"reset","t":0.2})"
      "\n");
  auto cmds = ParseCommandLog(in, 20.0);
  ASSERT_TRUE(cmds.ok()) << cmds.status();
  ASSERT_EQ(cmds->size(), 3u);
  EXPECT_EQ((*cmds)[0].kind, ScriptedCommand::Kind::kDelta);
  EXPECT_EQ((*cmds)[0].seq, 3);
  EXPECT_DOUBLE_EQ((*cmds)[0].t, 0.0);
  EXPECT_DOUBLE_EQ((*cmds)[0].delta.translation.x(), 0.001);
  EXPECT_EQ((*cmds)[0].client_time_ms, 5);
  EXPECT_EQ((*cmds)[1].kind, ScriptedCommand::Kind::kTarget);
  EXPECT_EQ((*cmds)[1].seq, 1);
  EXPECT_TRUE((*cmds)[1].gripper.value());
  EXPECT_DOUBLE_EQ((*cmds)[1].target.position.z(), 0.4);
  EXPECT_EQ((*cmds)[2].kind, ScriptedCommand::Kind::kReset);
}

TEST(ParseCommandLogTest, DeltaLinesWithoutTimeAreSpacedAtCommandRate) {
  std::istringstream in(
      R"({"type":"delta_pose","translation":[0,0,0],"rotation":[0,0,0]})"
      "\n"
      R"({"type":"delta_pose","translation":[0,0,0],"rotation":[0,0,0]})"
      "\n");
  auto cmds = ParseCommandLog(in, 20.0);
  ASSERT_TRUE(cmds.ok());
  ASSERT_EQ(cmds->size(), 2u);
  EXPECT_DOUBLE_EQ((*cmds)[1].t, 0.05);
}

TEST(ParseCommandLogTest, ErrorsNameTheLine) {
  const std::pair<const char*, const char*> cases[] = {
      {R"({"type":"reset"})" "\nnot json\n", "line 2"},
      {R"({"type":"target","position":[0,0,0]})", "line 1: t"},
      {"\n" R"({"type":"delta_pose","translation":[0,0],"rotation":[0,0,0]})",
       "line 2: translation"},
      {R"({"type":"jump"})", "unknown command type"},
      {R"({"type":"reset","t":1})" "\n" R"({"type":"reset","t":0.5})",
       "line 2: t goes backwards"},
  };
  for (const auto& [text, needle] : cases) {
    std::istringstream in(text);
    auto cmds = ParseCommandLog(in, 20.0);
    ASSERT_FALSE(cmds.ok()) << text;
    EXPECT_NE(cmds.status().message().find(needle), std::string::npos)
        << cmds.status().message();
  }
}

TEST(ParseCommandLogTest, SynthOutputParsesBack) {
  SyntheticTraceSpec spec;
  spec.duration_s = 2.0;
  const GatewayConfig config = Config();
  auto samples = GenerateTrace(
      spec, ForwardKinematics(config.controller.dh, config.home), 20.0);
  ASSERT_TRUE(samples.ok());
  std::istringstream in(SerializeTargetLog(spec, 20.0, *samples));
  auto cmds = ParseCommandLog(in, 20.0);
  ASSERT_TRUE(cmds.ok()) << cmds.status();
  const auto expected = CommandsFromTrace(*samples);
  ASSERT_EQ(cmds->size(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ((*cmds)[i].t, expected[i].t);
    EXPECT_EQ((*cmds)[i].target.position, expected[i].target.position);
    EXPECT_EQ((*cmds)[i].gripper, expected[i].gripper);
  }
}

TEST(ReplayTest, EmptyLogIsMotionless) {
  auto log = Replay(Config(), {}, {});
  ASSERT_TRUE(log.ok());
  auto report = ComputeMetrics(*log, "empty");
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->idle_warning);
  EXPECT_EQ(report->fault_count, 0);
}

TEST(ReplayTest, SampleCountAndTimestamps) {
  SyntheticTraceSpec spec;
  spec.duration_s = 5.0;
  const auto cmds = Trace(spec);
  const TrajectoryLog log = ReplayWith(cmds, ReplayMode::kFiltered);
  // Last command at t = 4.95 s -> tick 495, plus one command period.
  EXPECT_EQ(log.samples.size(), 500u);
  EXPECT_TRUE(ValidateUniformTimestamps(log).ok());
  EXPECT_EQ(log.task, "t");
}

TEST(ReplayTest, FilteredIsFeasibleRawFaults) {
  SyntheticTraceSpec spec;
  spec.duration_s = 20.0;
  const auto cmds = Trace(spec);
  EXPECT_EQ(CountFaults(ReplayWith(cmds, ReplayMode::kFiltered)), 0);
  EXPECT_GE(CountFaults(ReplayWith(cmds, ReplayMode::kRaw)), 1);
}

TEST(ReplayTest, Deterministic) {
  SyntheticTraceSpec spec;
  spec.duration_s = 10.0;
  const auto cmds = Trace(spec);
  std::ostringstream a, b;
  WriteTrajectoryLog(ReplayWith(cmds, ReplayMode::kFiltered), a);
  WriteTrajectoryLog(ReplayWith(cmds, ReplayMode::kFiltered), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(ReplayTest, ResetClearsRawFault) {
  SyntheticTraceSpec spec;
  spec.duration_s = 10.0;
  auto cmds = Trace(spec);
  const TrajectoryLog raw = ReplayWith(cmds, ReplayMode::kRaw);
  ASSERT_GE(CountFaults(raw), 1);
  ScriptedCommand reset;
  reset.kind = ScriptedCommand::Kind::kReset;
  reset.t = cmds.back().t;
  cmds.push_back(reset);
  const TrajectoryLog with_reset = ReplayWith(cmds, ReplayMode::kRaw);
  EXPECT_FALSE(with_reset.samples.back().faulted());
}

// Randomized 60 s sessions: the filter keeps every one fault-free, while
// the same operator stream sent raw trips the controller in each.
TEST(ReplayPropertyTest, FeasibilityOverRandomSessions) {
  std::mt19937_64 rng(20260915);
  std::uniform_real_distribution<double> amplitude(0.08, 0.16);
  std::uniform_real_distribution<double> jitter(0.0015, 0.003);
  for (int session = 0; session < 100; ++session) {
    SyntheticTraceSpec spec;
    spec.kind = TraceKind::kJitteryPickPlace;
    spec.duration_s = 60.0;
    spec.seed = rng();
    spec.amplitude_m = amplitude(rng);
    spec.jitter_std_m = jitter(rng);
    const auto cmds = Trace(spec);
    const TrajectoryLog filtered = ReplayWith(cmds, ReplayMode::kFiltered);
    const TrajectoryLog raw = ReplayWith(cmds, ReplayMode::kRaw);
    ASSERT_EQ(filtered.samples.size(), 6000u);
    EXPECT_EQ(CountFaults(filtered), 0)
        << "session " << session << " seed " << spec.seed;
    EXPECT_GE(CountFaults(raw), 1)
        << "session " << session << " seed " << spec.seed;
  }
}

}  // namespace
}  // namespace telefilter
