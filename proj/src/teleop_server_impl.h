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

#ifndef TELEFILTER_SRC_TELEOP_SERVER_IMPL_H_
#define TELEFILTER_SRC_TELEOP_SERVER_IMPL_H_

#include <atomic>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <thread>

#include "absl/status/status.h"
#include "session.h"
#include "telefilter/config.h"
#include "telefilter/gateway.h"
#include "telefilter/teleop_server.h"

namespace telefilter {

class TeleopServerImpl {
 public:
  TeleopServerImpl(Gateway* gateway, ServerOptions options, ClockMode clock);
  ~TeleopServerImpl();

  absl::Status Listen();
  void RunInBackground();
  void Stop();

  uint16_t port() const { return port_; }
  bool operator_finished() const { return operator_finished_.load(); }
  void Publish(const StateMessage& state);

  // Network thread only.
  bool Register(const std::shared_ptr<Session>& session);
  void Unregister(Session* session);
  void HandleText(Session& session, std::string_view text);

 private:
  void DoAccept();
  void Broadcast(const std::string& text);

  // Declared first so it outlives the sockets below.
  net::io_context ioc_;
  tcp::acceptor acceptor_;
  std::set<std::shared_ptr<Session>> sessions_;
  Session* operator_ = nullptr;

  Gateway* gateway_;
  ServerOptions options_;
  ClockMode clock_;
  uint16_t port_ = 0;
  std::thread thread_;
  std::atomic<bool> operator_finished_{false};
  std::atomic<int> live_sessions_{0};
  bool stopped_ = false;
};

}  // namespace telefilter

#endif  // TELEFILTER_SRC_TELEOP_SERVER_IMPL_H_
