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

#ifndef MGTLOC_EXTERNAL_SCORER_HPP_
#define MGTLOC_EXTERNAL_SCORER_HPP_

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "mgtloc/scorers.hpp"

namespace mgtloc {

// Line protocol spoken with external scorers (one JSON object per line).
//
//   sidecar -> {"ready":true,"feature_dim":1024,"name":"..."}   (handshake)
//   client  -> {"id":"...","mode":"score"|"feature","texts":[...]}
//   sidecar -> {"id":"...","scores":[...]}
//            | {"id":"...","features":[[...],...]}
//            | {"id":"...","error":"..."}
struct SidecarHandshake {
  std::size_t feature_dim = kDefaultFeatureDim;
  std::string name;
};

inline constexpr std::chrono::milliseconds kDefaultSidecarTimeout{120000};

std::string encode_protocol_request(const ChunkRequest& request);
SidecarHandshake decode_handshake(std::string_view line);
// Checks the id echo and the payload kind; ProtocolError on any violation.
ChunkResult decode_protocol_response(std::string_view line,
                                     const ChunkRequest& request);

// Bidirectional newline-delimited byte stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(std::string_view line) = 0;
  // Throws TransportError on EOF, I/O failure or timeout.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
  virtual std::string describe() const = 0;
};

// Runs `command` through /bin/sh with its stdin/stdout attached.
std::unique_ptr<LineChannel> spawn_process_channel(const std::string& command);
std::unique_ptr<LineChannel> connect_tcp_channel(const std::string& host,
                                                 int port);

// Client for an external scorer. Requests are sent one at a time; concurrent
// callers are serialized.
class ExternalScorer final : public ChunkScorer {
 public:
  // Reads the handshake from `channel`.
  ExternalScorer(std::unique_ptr<LineChannel> channel,
                 std::chrono::milliseconds timeout = kDefaultSidecarTimeout);

  // `target` is either "tcp://host:port" or a shell command.
  static std::unique_ptr<ExternalScorer> launch(
      const std::string& target,
      std::chrono::milliseconds timeout = kDefaultSidecarTimeout);

  std::string name() const override { return "extern:" + handshake_.name; }
  bool supports(ScoreMode) const override { return true; }
  std::size_t feature_dim() const override { return handshake_.feature_dim; }
  ChunkResult score(const ChunkRequest& request) override;

  const SidecarHandshake& handshake() const { return handshake_; }

 private:
  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  SidecarHandshake handshake_;
  std::mutex mutex_;
};

}  // namespace mgtloc

#endif  // MGTLOC_EXTERNAL_SCORER_HPP_
