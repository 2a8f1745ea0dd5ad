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

#ifndef MGTLOC_ERRORS_HPP_
#define MGTLOC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mgtloc {

// Root of the library's exception hierarchy. The CLI maps each subclass to a
// distinct process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or arguments supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, articles, model files).
class DataError : public Error {
 public:
  using Error::Error;
};

// An external scorer could not be reached, died, or timed out.
class TransportError : public Error {
 public:
  using Error::Error;
};

// An external scorer replied with something that violates the line protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgtloc

#endif  // MGTLOC_ERRORS_HPP_
