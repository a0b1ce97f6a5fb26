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

#include "telefilter/teleop_server.h"

#include <chrono>
#include <string>
#include <utility>
#include <variant>

#include "absl/strings/str_cat.h"
#include "teleop_server_impl.h"

namespace telefilter {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

IngestResult Rejected(std::string reason) {
  return {IngestOutcome::kRejected, std::move(reason)};
}

}  // namespace

TeleopServerImpl::TeleopServerImpl(Gateway* gateway, ServerOptions options,
                                   ClockMode clock)
    : acceptor_(ioc_),
      gateway_(gateway),
      options_(std::move(options)),
      clock_(clock) {}

TeleopServerImpl::~TeleopServerImpl() { Stop(); }

absl::Status TeleopServerImpl::Listen() {
  beast::error_code ec;
  const auto address = net::ip::make_address(options_.address, ec);
  if (ec) {
    return absl::InvalidArgumentError(
        absl::StrCat("server.address: invalid address '", options_.address,
                     "': ", ec.message()));
  }
  const tcp::endpoint endpoint(address, options_.port);
  acceptor_.open(endpoint.protocol(), ec);
  if (!ec) acceptor_.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor_.bind(endpoint, ec);
  if (!ec) acceptor_.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat("cannot listen on ",
                                               options_.address, ":",
                                               options_.port, ": ",
                                               ec.message()));
  }
  port_ = acceptor_.local_endpoint().port();
  return absl::OkStatus();
}

void TeleopServerImpl::RunInBackground() {
  DoAccept();
  thread_ = std::thread([this] { ioc_.run(); });
}

void TeleopServerImpl::DoAccept() {
  acceptor_.async_accept(
      net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) return;  // acceptor closed
        std::make_shared<Session>(std::move(socket), this)->Start();
        DoAccept();
      });
}

void TeleopServerImpl::Stop() {
  if (stopped_) return;
  stopped_ = true;
  if (thread_.joinable()) {
    net::post(ioc_, [this] {
      beast::error_code ignored;
      acceptor_.close(ignored);
      // Copy: Shutdown may call back into Unregister.
      const auto sessions = sessions_;
      for (const auto& s : sessions) s->Shutdown();
    });
    // Give close handshakes a moment before tearing down the loop.
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::seconds(2);
    while (live_sessions_.load() > 0 &&
           std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    ioc_.stop();
    thread_.join();
  }
  sessions_.clear();
}

void TeleopServerImpl::Publish(const StateMessage& state) {
  net::post(ioc_, [this, text = SerializeState(state)] { Broadcast(text); });
}

void TeleopServerImpl::Broadcast(const std::string& text) {
  for (const auto& s : sessions_) s->Send(text, /*is_state=*/true);
}

bool TeleopServerImpl::Register(const std::shared_ptr<Session>& session) {
  if (session->role() == SessionRole::kOperator) {
    if (operator_ != nullptr) return false;
    operator_ = session.get();
  }
  sessions_.insert(session);
  ++live_sessions_;
  return true;
}

void TeleopServerImpl::Unregister(Session* session) {
  for (auto it = sessions_.begin(); it != sessions_.end(); ++it) {
    if (it->get() != session) continue;
    if (operator_ == session) {
      operator_ = nullptr;
      operator_finished_.store(true);
    }
    sessions_.erase(it);
    --live_sessions_;
    return;
  }
}

void TeleopServerImpl::HandleText(Session& session, std::string_view text) {
  auto parsed = ParseClientMessage(text);
  if (!parsed.ok()) {
    session.Send(SerializeAck(PeekSeq(text),
                              Rejected(std::string(parsed.status().message()))));
    return;
  }
  if (std::holds_alternative<DescribeMessage>(*parsed)) {
    session.Send(SerializeDescribe(gateway_->config()));
    return;
  }
  if (session.role() == SessionRole::kObserver) {
    session.Send(SerializeAck(PeekSeq(text), Rejected("observer is read-only")));
    return;
  }
  std::visit(
      Overloaded{
          [&](const CommandMessage& cmd) {
            session.Send(SerializeAck(cmd.seq, gateway_->IngestCommand(cmd)));
          },
          [&](const ResetMessage&) {
            gateway_->RequestReset();
            session.Send(SerializeAck(std::nullopt, IngestResult{}));
          },
          [&](const DescribeMessage&) {},
          [&](const StepMessage& step) {
            if (clock_ != ClockMode::kSimulated) {
              session.Send(SerializeAck(
                  std::nullopt, Rejected("step requires the simulated clock")));
              return;
            }
            const int decimation = options_.telemetry_decimation;
            for (int i = 0; i < step.ticks; ++i) {
              const StateMessage state = gateway_->ControlTick();
              if (state.tick % decimation == 0 || i + 1 == step.ticks) {
                Broadcast(SerializeState(state));
              }
            }
          },
      },
      *parsed);
}

TeleopServer::TeleopServer(std::unique_ptr<TeleopServerImpl> impl)
    : impl_(std::move(impl)) {}

TeleopServer::~TeleopServer() { Stop(); }

absl::StatusOr<std::unique_ptr<TeleopServer>> TeleopServer::Start(
    Gateway* gateway, const ServerOptions& options, ClockMode clock) {
  auto impl = std::make_unique<TeleopServerImpl>(gateway, options, clock);
  if (absl::Status s = impl->Listen(); !s.ok()) return s;
  impl->RunInBackground();
  return std::unique_ptr<TeleopServer>(new TeleopServer(std::move(impl)));
}

uint16_t TeleopServer::port() const { return impl_->port(); }

void TeleopServer::Publish(const StateMessage& state) {
  impl_->Publish(state);
}

bool TeleopServer::operator_finished() const {
  return impl_->operator_finished();
}

void TeleopServer::Stop() { impl_->Stop(); }

absl::StatusOr<TrajectoryLog> RunSession(const GatewayConfig& config,
                                         const SessionOptions& options) {
  auto gateway = Gateway::Create(config);
  if (!gateway.ok()) return gateway.status();
  auto server = TeleopServer::Start(gateway->get(), config.server,
                                    options.clock);
  if (!server.ok()) return server.status();
  if (options.on_listening) options.on_listening((*server)->port());

  auto should_stop = [&] {
    return (options.shutdown != nullptr && options.shutdown->load()) ||
           (*server)->operator_finished();
  };
  if (options.clock == ClockMode::kRealTime) {
    using Clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>((*gateway)->dt()));
    const int decimation = config.server.telemetry_decimation;
    auto next = Clock::now();
    while (!should_stop()) {
      next += period;
      const StateMessage state = (*gateway)->ControlTick();
      if (state.tick % decimation == 0) (*server)->Publish(state);
      std::this_thread::sleep_until(next);
    }
  } else {
    while (!should_stop()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  (*server)->Stop();

  TrajectoryLog log = (*gateway)->TakeLog();
  if (!config.log_path.empty()) {
    if (absl::Status s = WriteTrajectoryLogFile(log, config.log_path);
        !s.ok()) {
      return s;
    }
  }
  return log;
}

}  // namespace telefilter
