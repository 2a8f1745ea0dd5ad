// Copyright 2026 The mgtloc Authors.
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

#include "mgtloc/external_scorer.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include <spdlog/spdlog.h>

#include "json_util.hpp"
#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

using detail::Json;
using Clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

class FdLineChannel : public LineChannel {
 public:
  FdLineChannel(int read_fd, int write_fd, std::string description)
      : read_fd_(read_fd), write_fd_(write_fd),
        description_(std::move(description)) {}

  ~FdLineChannel() override {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
  }

  FdLineChannel(const FdLineChannel&) = delete;
  FdLineChannel& operator=(const FdLineChannel&) = delete;

  void write_line(std::string_view line) override {
    std::string data(line);
    data.push_back('\n');
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = write_some(data.data() + sent, data.size() - sent);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(description_ + ": write failed: " + errno_text());
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    const auto deadline = Clock::now() + timeout;
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (left.count() <= 0) {
        throw TransportError(description_ + ": timed out after " +
                             std::to_string(timeout.count()) + " ms");
      }
      pollfd pfd{read_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw TransportError(description_ + ": poll failed: " + errno_text());
      }
      if (ready == 0) continue;
      char chunk[65536];
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(description_ + ": read failed: " + errno_text());
      }
      if (n == 0) {
        throw TransportError(description_ + ": connection closed");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string describe() const override { return description_; }

 protected:
  virtual ssize_t write_some(const char* data, std::size_t size) {
    return ::write(write_fd_, data, size);
  }

  int read_fd_;
  int write_fd_;

 private:
  std::string description_;
  std::string buffer_;
};

class ProcessChannel final : public FdLineChannel {
 public:
  ProcessChannel(pid_t pid, int read_fd, int write_fd, std::string command)
      : FdLineChannel(read_fd, write_fd, "sidecar '" + command + "'"),
        pid_(pid) {}

  ~ProcessChannel() override {
    // Closing stdin asks the sidecar to exit; escalate if it lingers.
    if (write_fd_ >= 0) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGTERM);
    ::waitpid(pid_, nullptr, 0);
  }

 private:
  pid_t pid_;
};

class SocketChannel final : public FdLineChannel {
 public:
  SocketChannel(int fd, std::string description)
      : FdLineChannel(fd, fd, std::move(description)) {}

 protected:
  ssize_t write_some(const char* data, std::size_t size) override {
    return ::send(write_fd_, data, size, MSG_NOSIGNAL);
  }
};

const Json& response_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ProtocolError(std::string("response lacks '") + key + "'");
  }
  return *it;
}

}  // namespace

std::string encode_protocol_request(const ChunkRequest& request) {
  Json j;
  j["id"] = request.request_id;
  j["mode"] = std::string(score_mode_name(request.mode));
  Json texts = Json::array();
  for (const Chunk& c : request.chunks) texts.push_back(c.text);
  j["texts"] = std::move(texts);
  return detail::dump_line(j);
}

SidecarHandshake decode_handshake(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error&) {
    throw ProtocolError("handshake is not JSON: " + std::string(line));
  }
  if (!j.is_object() || !j.contains("ready") || j["ready"] != true) {
    throw ProtocolError("handshake must contain \"ready\": true");
  }
  SidecarHandshake hs;
  try {
    if (j.contains("feature_dim")) {
      hs.feature_dim = j["feature_dim"].get<std::size_t>();
    }
    if (j.contains("name")) hs.name = j["name"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("malformed handshake: ") + e.what());
  }
  if (hs.feature_dim == 0) {
    throw ProtocolError("handshake reports feature_dim 0");
  }
  return hs;
}

ChunkResult decode_protocol_response(std::string_view line,
                                     const ChunkRequest& request) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error&) {
    throw ProtocolError("request '" + request.request_id +
                        "': reply is not JSON");
  }
  if (!j.is_object()) {
    throw ProtocolError("request '" + request.request_id +
                        "': reply is not an object");
  }
  try {
    const auto id = response_field(j, "id").get<std::string>();
    if (id != request.request_id) {
      throw ProtocolError("reply id '" + id + "' does not echo request id '" +
                          request.request_id + "'");
    }
    if (const auto err = j.find("error"); err != j.end()) {
      throw ProtocolError("request '" + request.request_id +
                          "': sidecar error: " + err->dump());
    }
    ChunkResult result;
    result.request_id = id;
    if (request.mode == ScoreMode::kScore) {
      result.scores = response_field(j, "scores").get<std::vector<double>>();
    } else {
      result.features = response_field(j, "features")
                            .get<std::vector<std::vector<double>>>();
    }
    return result;
  } catch (const Json::exception& e) {
    throw ProtocolError("request '" + request.request_id +
                        "': malformed reply: " + e.what());
  }
}

std::unique_ptr<LineChannel> spawn_process_channel(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) {
    throw TransportError("pipe() failed: " + errno_text());
  }
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError("pipe() failed: " + errno_text());
  }
  // A dead sidecar must surface as a write error, not a signal.
  ::signal(SIGPIPE, SIG_IGN);

  const pid_t pid = ::fork();
  if (pid < 0) {
    throw TransportError("fork() failed: " + errno_text());
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  return std::make_unique<ProcessChannel>(pid, from_child[0], to_child[1],
                                          command);
}

std::unique_ptr<LineChannel> connect_tcp_channel(const std::string& host,
                                                 int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
    fd = ::socket(p->ai_family, p->ai_socktype | SOCK_CLOEXEC, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  const std::string where = "tcp://" + host + ":" + service;
  if (fd < 0) throw TransportError("cannot connect to " + where);
  return std::make_unique<SocketChannel>(fd, where);
}

ExternalScorer::ExternalScorer(std::unique_ptr<LineChannel> channel,
                               std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {
  handshake_ = decode_handshake(channel_->read_line(timeout_));
  spdlog::info("external scorer '{}' ready (feature_dim {})", handshake_.name,
               handshake_.feature_dim);
}

std::unique_ptr<ExternalScorer> ExternalScorer::launch(
    const std::string& target, std::chrono::milliseconds timeout) {
  constexpr std::string_view kTcp = "tcp://";
  if (target.starts_with(kTcp)) {
    const std::string rest = target.substr(kTcp.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw UsageError("expected tcp://host:port, got " + target);
    }
    int port = 0;
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad port in " + target);
    }
    return std::make_unique<ExternalScorer>(
        connect_tcp_channel(rest.substr(0, colon), port), timeout);
  }
  if (target.empty()) throw UsageError("empty external scorer command");
  return std::make_unique<ExternalScorer>(spawn_process_channel(target),
                                          timeout);
}

ChunkResult ExternalScorer::score(const ChunkRequest& request) {
  std::lock_guard lock(mutex_);
  try {
    channel_->write_line(encode_protocol_request(request));
    return decode_protocol_response(channel_->read_line(timeout_), request);
  } catch (const TransportError& e) {
    throw TransportError("request '" + request.request_id + "': " + e.what());
  }
}

}  // namespace mgtloc
