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

#include "session.h"

#include <utility>

#include "teleop_server_impl.h"
#include "telefilter/protocol.h"

namespace telefilter {

namespace {

bool OffersSubprotocol(beast::string_view header) {
  for (const auto& token : http::token_list(header)) {
    if (token == kSubprotocol) return true;
  }
  return false;
}

bool QueryHas(std::string_view query, std::string_view pair) {
  while (!query.empty()) {
    const size_t amp = query.find('&');
    if (query.substr(0, amp) == pair) return true;
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return false;
}

}  // namespace

Session::Session(tcp::socket socket, TeleopServerImpl* server)
    : ws_(std::move(socket)), server_(server) {}

void Session::Start() {
  http::async_read(ws_.next_layer(), buffer_, request_,
                   [self = shared_from_this()](beast::error_code ec,
                                               std::size_t) {
                     self->OnRequest(ec);
                   });
}

void Session::OnRequest(beast::error_code ec) {
  if (ec) return Finish();
  if (!websocket::is_upgrade(request_)) {
    return RejectHttp(http::status::bad_request, "websocket upgrade required\n");
  }
  const std::string_view target(request_.target().data(),
                                request_.target().size());
  const size_t query_at = target.find('?');
  const std::string_view path = target.substr(0, query_at);
  if (path != kEndpointPath) {
    return RejectHttp(http::status::not_found, "unknown endpoint\n");
  }
  if (query_at != std::string_view::npos &&
      QueryHas(target.substr(query_at + 1), "role=observer")) {
    role_ = SessionRole::kObserver;
  }
  const beast::string_view offered =
      request_[http::field::sec_websocket_protocol];
  const bool echo = !offered.empty();
  if (echo && !OffersSubprotocol(offered)) {
    return RejectHttp(http::status::bad_request,
                      "unsupported subprotocol, expected telefilter.v1\n");
  }
  ws_.set_option(
      websocket::stream_base::timeout::suggested(beast::role_type::server));
  ws_.set_option(websocket::stream_base::decorator(
      [echo](websocket::response_type& res) {
        if (echo) res.set(http::field::sec_websocket_protocol, kSubprotocol);
      }));
  ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) {
    self->OnAccept(ec);
  });
}

void Session::RejectHttp(http::status status, std::string body) {
  http_response_ = std::make_shared<http::response<http::string_body>>(
      status, request_.version());
  http_response_->set(http::field::content_type, "text/plain");
  http_response_->body() = std::move(body);
  http_response_->prepare_payload();
  http_response_->keep_alive(false);
  http::async_write(ws_.next_layer(), *http_response_,
                    [self = shared_from_this()](beast::error_code,
                                                std::size_t) {
                      beast::error_code ignored;
                      self->ws_.next_layer().socket().shutdown(
                          tcp::socket::shutdown_send, ignored);
                      self->Finish();
                    });
}

void Session::OnAccept(beast::error_code ec) {
  if (ec) return Finish();
  accepted_ = true;
  ws_.text(true);
  if (!server_->Register(shared_from_this())) {
    SendAndClose(SerializeError(kSessionBusy));
    return;
  }
  DoRead();
}

void Session::DoRead() {
  ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec,
                                                      std::size_t) {
    self->OnRead(ec);
  });
}

void Session::OnRead(beast::error_code ec) {
  if (ec) return Finish();
  const std::string text = beast::buffers_to_string(buffer_.data());
  buffer_.consume(buffer_.size());
  server_->HandleText(*this, text);
  if (!closing_ && !finished_) DoRead();
}

void Session::Send(std::string text, bool is_state) {
  if (finished_ || closing_ || !accepted_) return;
  // The front element is on the wire while writing_ is set.
  const size_t replaceable_from = writing_ ? 1 : 0;
  if (is_state && queue_.size() > replaceable_from &&
      queue_.back().is_state) {
    queue_.back().text = std::move(text);
    return;
  }
  queue_.push_back({std::move(text), is_state});
  if (!writing_) DoWrite();
}

void Session::SendAndClose(std::string text) {
  if (finished_ || closing_) return;
  if (!text.empty()) Send(std::move(text));
  close_after_write_ = true;
  if (!writing_) {
    closing_ = true;
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {
                      self->Finish();
                    });
  }
}

void Session::Shutdown() {
  if (!accepted_) {
    beast::error_code ignored;
    ws_.next_layer().socket().close(ignored);
    return;
  }
  SendAndClose("");
}

void Session::DoWrite() {
  writing_ = true;
  ws_.async_write(net::buffer(queue_.front().text),
                  [self = shared_from_this()](beast::error_code ec,
                                              std::size_t) {
                    self->OnWrite(ec);
                  });
}

void Session::OnWrite(beast::error_code ec) {
  if (ec) return Finish();
  queue_.pop_front();
  if (!queue_.empty()) return DoWrite();
  writing_ = false;
  if (close_after_write_ && !closing_) {
    closing_ = true;
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {
                      self->Finish();
                    });
  }
}

void Session::Finish() {
  if (finished_) return;
  finished_ = true;
  server_->Unregister(this);
}

}  // namespace telefilter
