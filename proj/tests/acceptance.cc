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

// Acceptance suite: runs every primary criterion and prints one PASS/FAIL
// line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "oracles.h"
#include "reference_table.h"
#include "telefilter/arm_model.h"
#include "telefilter/command_filter.h"
#include "telefilter/config.h"
#include "telefilter/gateway.h"
#include "telefilter/metrics.h"
#include "telefilter/replay.h"
#include "telefilter/synth.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {
namespace {

using testing::RandomVec;
using testing::Uniform;
using Clock = std::chrono::steady_clock;

// Records the first failed expectation.
class Check {
 public:
  bool Expect(bool condition, const std::string& what) {
    if (!condition && ok_) {
      ok_ = false;
      failure_ = what;
    }
    return condition;
  }
  void Note(const std::string& note) { note_ = note; }
  bool ok() const { return ok_; }
  const std::string& detail() const { return ok_ ? note_ : failure_; }

 private:
  bool ok_ = true;
  std::string failure_;
  std::string note_;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GatewayConfig DefaultConfig() {
  GatewayConfig config;
  ValidateGatewayConfig(config).IgnoreError();
  return config;
}

std::vector<ScriptedCommand> CorpusCommands(const SyntheticTraceSpec& spec,
                                            const GatewayConfig& config) {
  auto samples = GenerateTrace(
      spec, ForwardKinematics(config.controller.dh, config.home),
      config.filter.command_frequency_hz);
  return samples.ok() ? CommandsFromTrace(*samples)
                      : std::vector<ScriptedCommand>{};
}

void FilterOracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(9001);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    FilterParams p;
    p.command_frequency_hz = Uniform(rng, 5.0, 60.0);
    p.control_frequency_hz =
        p.command_frequency_hz * std::uniform_int_distribution<int>(2, 50)(rng);
    p.max_position_speed_m = Uniform(rng, 1e-4, 0.05);
    p.max_orientation_speed_rad = Uniform(rng, 1e-3, 0.2);
    p.noise_position_threshold_m = Uniform(rng, 1e-5, 0.01);
    p.noise_orientation_threshold_rad = Uniform(rng, 1e-4, 0.05);
    const DeltaPose d{RandomVec(rng, 0.03), RandomVec(rng, 0.2)};
    const auto ref = testing::ReferenceFilter(
        {d.translation.x(), d.translation.y(), d.translation.z()},
        {d.rotation.x(), d.rotation.y(), d.rotation.z()},
        p.command_frequency_hz, p.control_frequency_hz, p.max_position_speed_m,
        p.max_orientation_speed_rad, p.noise_position_threshold_m,
        p.noise_orientation_threshold_rad);
    const SubstepPlan plan = ProcessCommand(d, p);
    if (!c.Expect(static_cast<int>(plan.substeps.size()) == ref.k,
                  absl::StrCat("substep count differs at input ", i))) {
      return;
    }
    for (const DeltaPose& s : plan.substeps) {
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(s.translation[k] - ref.t[k]));
        worst = std::max(worst, std::abs(s.rotation[k] - ref.r[k]));
      }
    }
  }
  const double elapsed = Seconds(start);
  c.Expect(worst <= 1e-12, absl::StrCat("max deviation ", worst));
  c.Expect(elapsed < 5.0, absl::StrCat("took ", elapsed, " s"));
  c.Note(absl::StrCat("10000 inputs, max deviation ", worst, ", ", elapsed,
                      " s"));
}

void SubstepExactness(Check& c) {
  std::mt19937_64 rng(9002);
  int cases = 0;
  for (int k = 2; k <= 50; ++k) {
    for (int trial = 0; trial < 50; ++trial, ++cases) {
      FilterParams p;
      p.command_frequency_hz = Uniform(rng, 5.0, 60.0);
      p.control_frequency_hz = p.command_frequency_hz * k;
      FilteredDelta f;
      f.translation = RandomVec(rng, 0.05);
      f.rotation = RandomVec(rng, 0.3);
      const SubstepPlan plan = Interpolate(f, p);
      if (!c.Expect(static_cast<int>(plan.substeps.size()) == k,
                    absl::StrCat("K=", k, ": wrong substep count"))) {
        return;
      }
      Vec3 st = Vec3::Zero(), sr = Vec3::Zero();
      for (const DeltaPose& s : plan.substeps) {
        c.Expect(s.translation == f.translation / k &&
                     s.rotation == f.rotation / k,
                 absl::StrCat("K=", k, ": substep is not delta/K exactly"));
        st += s.translation;
        sr += s.rotation;
      }
      c.Expect((st - f.translation).norm() <= 1e-12 &&
                   (sr - f.rotation).norm() <= 1e-12,
               absl::StrCat("K=", k, ": substeps do not sum back"));
    }
  }
  c.Note(absl::StrCat(cases, " plans, K = 2..50"));
}

std::vector<SyntheticTraceSpec> DichotomySpecs() {
  std::vector<SyntheticTraceSpec> specs = BundledJitteryCorpus();
  const size_t n = specs.size();
  for (uint64_t offset : {100u, 200u}) {
    for (size_t i = 0; i < n; ++i) {
      SyntheticTraceSpec variant = specs[i];
      variant.seed += offset;
      specs.push_back(variant);
    }
  }
  return specs;
}

void FaultDichotomy(Check& c) {
  const auto start = Clock::now();
  const GatewayConfig config = DefaultConfig();
  const auto specs = DichotomySpecs();
  int min_raw = 1 << 30;
  for (const SyntheticTraceSpec& spec : specs) {
    const auto cmds = CorpusCommands(spec, config);
    if (!c.Expect(!cmds.empty(), absl::StrCat("seed ", spec.seed,
                                              ": trace generation failed"))) {
      return;
    }
    auto filtered = Replay(config, cmds, {.mode = ReplayMode::kFiltered, .task = "corpus"});
    auto raw = Replay(config, cmds, {.mode = ReplayMode::kRaw, .task = "corpus"});
    if (!c.Expect(filtered.ok() && raw.ok(), "replay failed")) return;
    c.Expect(CountFaults(*filtered) == 0,
             absl::StrCat("seed ", spec.seed, ": filtered replay faulted"));
    const int raw_faults = CountFaults(*raw);
    min_raw = std::min(min_raw, raw_faults);
    c.Expect(raw_faults >= 1,
             absl::StrCat("seed ", spec.seed, ": raw replay did not fault"));
  }
  const double elapsed = Seconds(start);
  c.Expect(elapsed < 60.0, absl::StrCat("took ", elapsed, " s"));
  c.Note(absl::StrCat(specs.size(), " traces, filtered 0 faults, raw >= ",
                      min_raw, " faults each, ", elapsed, " s"));
}

void JerkReduction(Check& c) {
  const GatewayConfig config = DefaultConfig();
  double worst = 0.0;
  for (const SyntheticTraceSpec& spec : BundledJitteryCorpus()) {
    auto log = Replay(config, CorpusCommands(spec, config),
                      {.mode = ReplayMode::kFiltered, .task = "corpus"});
    if (!c.Expect(log.ok(), "replay failed")) return;
    auto m = ComputeMetrics(*log, "corpus");
    if (!c.Expect(m.ok() && m->commanded_jerk > 0.0, "no commanded jerk")) {
      return;
    }
    const double ratio = m->executed_jerk / m->commanded_jerk;
    worst = std::max(worst, ratio);
    c.Expect(ratio <= 0.5, absl::StrCat("seed ", spec.seed,
                                        ": executed/commanded = ", ratio));
  }
  c.Note(absl::StrCat("worst executed/commanded ratio ", worst));
}

void Kinematics(Check& c) {
  const DHParams dh = DefaultDHParams();
  const JointLimits limits = DefaultJointLimits();
  std::mt19937_64 rng(9003);
  const double h = 1e-6;
  double worst_j = 0.0;
  for (int n = 0; n < 100; ++n) {
    const JointVector q = testing::RandomJoints(rng, limits);
    const Jacobian j = GeometricJacobian(dh, q);
    for (int i = 0; i < kNumJoints; ++i) {
      JointVector qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const testing::M4 tp = testing::ReferenceFk(dh, qp);
      const testing::M4 tm = testing::ReferenceFk(dh, qm);
      testing::M4 rel{};
      for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) {
          for (int k = 0; k < 3; ++k) rel[r][col] += tp[r][k] * tm[col][k];
        }
      }
      const testing::A3 w = testing::RotationLog(rel);
      for (int r = 0; r < 3; ++r) {
        worst_j = std::max(
            worst_j, std::abs(j(r, i) - (tp[r][3] - tm[r][3]) / (2 * h)));
        worst_j = std::max(worst_j, std::abs(j(3 + r, i) - w[r] / (2 * h)));
      }
    }
  }
  c.Expect(worst_j <= 1e-6, absl::StrCat("Jacobian deviation ", worst_j));

  double worst_residual = 0.0;
  for (int checked = 0; checked < 100;) {
    const JointVector q = testing::RandomJoints(rng, limits, 0.2);
    if (testing::SmallestSingularValue(GeometricJacobian(dh, q)) < 0.05) continue;
    const DeltaPose dx{RandomVec(rng, 1e-3), RandomVec(rng, 2e-3)};
    const ResolvedRateResult r = ResolvedRateStep(dh, q, dx, 1e-4);
    const Pose want = PoseApply(ForwardKinematics(dh, q), dx);
    const Pose got = ForwardKinematics(dh, q + r.dq);
    worst_residual =
        std::max(worst_residual, (got.position - want.position).norm());
    ++checked;
  }
  c.Expect(worst_residual < 1e-5,
           absl::StrCat("resolved-rate residual ", worst_residual, " m"));

  const double lambda = 1e-3;
  for (double mag : {1e-4, 1e-2, 1.0, 100.0}) {
    DeltaPose dx;
    dx.translation = Vec3(0, 0, mag);
    const ResolvedRateResult r =
        ResolvedRateStep(dh, JointVector::Zero(), dx, lambda);
    // Damped least squares cannot exceed |dx| / (2 lambda).
    c.Expect(r.dq.allFinite() && r.dq.norm() <= mag / (2 * lambda) * 1.000001,
             absl::StrCat("unbounded step at singularity, |dx| = ", mag));
  }
  c.Note(absl::StrCat("Jacobian dev ", worst_j, ", IK residual ",
                      worst_residual, " m"));
}

std::vector<Vec3> Walk(std::mt19937_64& rng, int n, double step) {
  std::vector<Vec3> p = {Vec3(0.4, 0.0, 0.5)};
  for (int k = 1; k < n; ++k) p.push_back(p.back() + RandomVec(rng, step));
  return p;
}

void MetricsOracles(Check& c) {
  std::mt19937_64 rng(9004);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cmd = Walk(rng, 100, 0.01);
    const auto exe = Walk(rng, 100, 0.01);
    TrajectoryLog log;
    for (size_t k = 0; k < cmd.size(); ++k) {
      LogSample s;
      s.t = 0.01 * static_cast<double>(k + 1);
      s.commanded.position = cmd[k];
      s.executed.position = exe[k];
      log.samples.push_back(s);
    }
    auto rms = RmsErrorMm(log);
    c.Expect(rms.ok() &&
                 std::abs(*rms - testing::ReferenceRmsMm(cmd, exe)) <= 1e-9,
             "rms differs from loop oracle");
    const double dt = Uniform(rng, 0.005, 0.05);
    const auto jerk_walk = Walk(rng, 100, 1e-4);
    auto jerk = AverageJerkNorm(jerk_walk, dt);
    c.Expect(jerk.ok() && std::abs(*jerk - testing::ReferenceJerk(
                                               jerk_walk, dt)) <= 1e-9,
             "jerk differs from loop oracle");
  }
  std::vector<Vec3> quad, cubic;
  for (int k = 0; k < 200; ++k) {
    const double t = k * 0.01;
    quad.push_back(Vec3(0.3 * t * t - 0.1 * t + 0.2, -0.5 * t * t, 0.05 * t));
    cubic.push_back(Vec3(t * t * t, 0, 0));
  }
  auto q = AverageJerkNorm(quad, 0.01);
  c.Expect(q.ok() && std::abs(*q) <= 1e-9,
           absl::StrCat("quadratic jerk ", q.ok() ? *q : -1.0));
  auto cu = AverageJerkNorm(cubic, 0.01);
  c.Expect(cu.ok() && std::abs(*cu - 6.0) <= 1e-6,
           absl::StrCat("cubic jerk ", cu.ok() ? *cu : -1.0));
  c.Note(absl::StrCat("cubic jerk ", cu.ok() ? *cu : -1.0,
                      " (analytic 6), quadratic ", q.ok() ? *q : -1.0));
}

// synth -> serialized command log -> replay -> trajectory log -> report.
std::string Pipeline() {
  const GatewayConfig config = DefaultConfig();
  SyntheticTraceSpec spec;
  spec.seed = 42;
  const double f = config.filter.command_frequency_hz;
  auto samples = GenerateTrace(
      spec, ForwardKinematics(config.controller.dh, config.home), f);
  if (!samples.ok()) return "";
  const std::string trace = SerializeTargetLog(spec, f, *samples);
  std::istringstream trace_in(trace);
  auto cmds = ParseCommandLog(trace_in, f);
  if (!cmds.ok()) return "";
  auto log = Replay(config, *cmds, {.mode = ReplayMode::kFiltered, .task = "seed42"});
  if (!log.ok()) return "";
  std::ostringstream log_text;
  WriteTrajectoryLog(*log, log_text);
  std::istringstream log_in(log_text.str());
  auto reread = ReadTrajectoryLog(log_in);
  if (!reread.ok()) return "";
  auto report = ComputeMetrics(*reread, reread->task);
  if (!report.ok()) return "";
  const std::span<const MetricsReport> rows(&*report, 1);
  auto table = RenderReportTable(rows, JerkConvention::kSi);
  auto csv = RenderReportCsv(rows);
  auto plot = ExportPlotData(*reread);
  if (!table.ok() || !csv.ok() || !plot.ok()) return "";
  return trace + log_text.str() + *table + *csv + *plot;
}

void Determinism(Check& c) {
  const std::string a = Pipeline();
  const std::string b = Pipeline();
  c.Expect(!a.empty(), "pipeline failed");
  c.Expect(a == b, "artifacts differ between runs");
  c.Note(absl::StrCat(a.size(), " bytes identical"));
}

std::vector<std::string> Cells(const std::string& line) {
  std::vector<std::string> out;
  for (absl::string_view cell : absl::StrSplit(line, '|')) {
    out.emplace_back(absl::StripAsciiWhitespace(cell));
  }
  return out;
}

void ReportFidelity(Check& c) {
  auto table = RenderReportTable(testing::kReferenceRows, JerkConvention::kSi);
  if (!c.Expect(table.ok(), "render failed")) return;
  const std::vector<std::string> lines = absl::StrSplit(*table, '\n');
  if (!c.Expect(lines.size() >= 10, "table too short")) return;
  c.Expect(Cells(lines[0]) == std::vector<std::string>{"Task", "Time (s)",
                                                        "RMS (mm)",
                                                        "Comm. Jerk",
                                                        "Exe. Jerk"},
           "header: " + lines[0]);
  c.Expect(Cells(lines[2]) == std::vector<std::string>{"Bandu", "69.675",
                                                        "28.87", "0.000611",
                                                        "0.000147"},
           "Bandu row: " + lines[2]);
  const size_t bar = lines[0].find('|');
  for (size_t i = 2; i < 10; ++i) {
    c.Expect(lines[i].find('|') == bar, "misaligned row: " + lines[i]);
  }
  c.Note(lines[2]);
}

void GatewayTiming(Check& c) {
  auto g = Gateway::Create(DefaultConfig());
  if (!c.Expect(g.ok(), "gateway creation failed")) return;
  std::mt19937_64 rng(9005);
  const int ticks = static_cast<int>(
      std::lround(10.0 * (*g)->config().filter.control_frequency_hz));
  const int k = (*g)->config().filter.SubstepCount();
  int64_t seq = 0;
  for (int i = 0; i < ticks; ++i) {
    if (i % k == 0) {
      CommandMessage cmd;
      cmd.seq = ++seq;
      cmd.delta.translation = RandomVec(rng, 0.004);
      (*g)->IngestCommand(cmd);
    }
    (*g)->ControlTick();
  }
  const size_t samples = (*g)->log().samples.size();
  c.Expect(samples >= 999 && samples <= 1001,
           absl::StrCat(samples, " samples in 10 s"));
  c.Expect(ValidateUniformTimestamps((*g)->log()).ok(),
           "non-uniform timestamps");

  auto flood = Gateway::Create(DefaultConfig());
  if (!c.Expect(flood.ok(), "gateway creation failed")) return;
  // Ten times f: 200 commands/s against 100 ticks/s.
  const int per_tick = static_cast<int>(
      std::lround(10.0 * (*flood)->config().filter.command_frequency_hz /
                  (*flood)->config().filter.control_frequency_hz));
  seq = 0;
  for (int i = 0; i < 2000; ++i) {
    for (int n = 0; n < per_tick; ++n) {
      CommandMessage cmd;
      cmd.seq = ++seq;
      cmd.delta.translation = RandomVec(rng, 0.01);
      (*flood)->IngestCommand(cmd);
      c.Expect((*flood)->MailboxDepth() <= 1, "mailbox holds more than one");
    }
    (*flood)->ControlTick();
  }
  std::map<int64_t, int> per_seq;
  for (const LogSample& s : (*flood)->log().samples) {
    if (s.seq_active) ++per_seq[*s.seq_active];
  }
  int most = 0;
  for (const auto& [s, n] : per_seq) most = std::max(most, n);
  c.Expect(most <= k, absl::StrCat("command ran ", most, " substeps > K"));
  c.Note(absl::StrCat(samples, " samples; flood max ", most,
                      " substeps per command (K = ", k, ")"));
}

struct Criterion {
  const char* name;
  std::function<void(Check&)> run;
};

int Main() {
  const Criterion criteria[] = {
      {"filter oracle equivalence", FilterOracle},
      {"substep exactness", SubstepExactness},
      {"fault dichotomy", FaultDichotomy},
      {"jerk reduction >= 2x", JerkReduction},
      {"kinematics checks", Kinematics},
      {"metrics oracles", MetricsOracles},
      {"determinism", Determinism},
      {"report fidelity", ReportFidelity},
      {"gateway timing", GatewayTiming},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    criterion.run(check);
    std::printf("%s  %-26s %s\n", check.ok() ? "PASS" : "FAIL", criterion.name,
                check.detail().c_str());
    std::fflush(stdout);
    failed += !check.ok();
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace telefilter

int main() { return telefilter::Main(); }
