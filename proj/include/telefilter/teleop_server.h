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

#ifndef TELEFILTER_TELEOP_SERVER_H_
#define TELEFILTER_TELEOP_SERVER_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "telefilter/config.h"
#include "telefilter/gateway.h"
#include "telefilter/protocol.h"
#include "telefilter/trajectory_log.h"

namespace telefilter {

enum class ClockMode {
  kRealTime,   // control loop ticks at f' on the steady clock
  kSimulated,  // ticks only on {"type":"step"} requests from the operator
};

class TeleopServerImpl;

// Websocket front end for one Gateway. All socket work happens on a single
// network thread; Publish hands snapshots over without blocking the caller.
//
// Connections to /teleop are operators by default (one at a time; a second
// one receives {"type":"error","reason":"session busy"} and is closed).
// /teleop?role=observer connections receive telemetry only.
class TeleopServer {
 public:
  static absl::StatusOr<std::unique_ptr<TeleopServer>> Start(
      Gateway* gateway, const ServerOptions& options, ClockMode clock);
  ~TeleopServer();

  uint16_t port() const;

  // Thread-safe; drops nothing but may coalesce frames for slow clients.
  void Publish(const StateMessage& state);

  // True once an operator has connected and then disconnected.
  bool operator_finished() const;

  // Closes all connections and joins the network thread. Idempotent.
  void Stop();

 private:
  explicit TeleopServer(std::unique_ptr<TeleopServerImpl> impl);
  std::unique_ptr<TeleopServerImpl> impl_;
};

struct SessionOptions {
  ClockMode clock = ClockMode::kRealTime;
  // Polled; set from a signal handler to end the session.
  const std::atomic<bool>* shutdown = nullptr;
  // Called once the listener is bound.
  std::function<void(uint16_t port)> on_listening;
};

// Serves until the operator disconnects or `shutdown` is set, then writes
// the log to config.log_path (when set) and returns it.
absl::StatusOr<TrajectoryLog> RunSession(const GatewayConfig& config,
                                         const SessionOptions& options);

}  // namespace telefilter

#endif  // TELEFILTER_TELEOP_SERVER_H_
