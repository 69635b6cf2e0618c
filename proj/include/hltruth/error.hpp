// Copyright 2026 The hltruth Authors.
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

#ifndef HLTRUTH_ERROR_HPP_
#define HLTRUTH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hltruth {

// Bad input data or a violated operation contract. The CLI maps this to
// exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure talking to a remote entailment scorer. Retryable; carries the id
// of the instance being scored when one is known. Exit code 3.
class RemoteError : public std::runtime_error {
 public:
  RemoteError(const std::string& what, std::string instance_id = {})
      : std::runtime_error(what), instance_id_(std::move(instance_id)) {}

  const std::string& instance_id() const { return instance_id_; }

 private:
  std::string instance_id_;
};

// The remote side answered, but not in the shape the wire protocol allows
// (non-2xx, malformed JSON, probability outside [0,1], id mismatch).
class ProtocolViolation : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

}  // namespace hltruth

#endif  // HLTRUTH_ERROR_HPP_
