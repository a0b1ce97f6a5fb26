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

#ifndef TELEFILTER_SRC_SESSION_H_
#define TELEFILTER_SRC_SESSION_H_

#include <deque>
#include <memory>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace telefilter {

namespace beast = boost::beast;
namespace http = boost::beast::http;
namespace websocket = boost::beast::websocket;
namespace net = boost::asio;
using tcp = boost::asio::ip::tcp;

class TeleopServerImpl;

enum class SessionRole { kOperator, kObserver };

// One websocket connection. Every member runs on the server's network
// thread, so no locking is needed.
class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, TeleopServerImpl* server);

  void Start();
  // Queues a text frame. State frames not yet on the wire are replaced by
  // newer ones.
  void Send(std::string text, bool is_state = false);
  // Sends `text` (if non-empty) and then closes the connection.
  void SendAndClose(std::string text);
  void Shutdown();

  SessionRole role() const { return role_; }

 private:
  struct Outgoing {
    std::string text;
    bool is_state;
  };

  void OnRequest(beast::error_code ec);
  void RejectHttp(http::status status, std::string body);
  void OnAccept(beast::error_code ec);
  void DoRead();
  void OnRead(beast::error_code ec);
  void DoWrite();
  void OnWrite(beast::error_code ec);
  void Finish();

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::shared_ptr<http::response<http::string_body>> http_response_;
  std::deque<Outgoing> queue_;
  TeleopServerImpl* server_;
  SessionRole role_ = SessionRole::kOperator;
  bool writing_ = false;
  bool close_after_write_ = false;
  bool closing_ = false;
  bool finished_ = false;
  bool accepted_ = false;
};

}  // namespace telefilter

#endif  // TELEFILTER_SRC_SESSION_H_
