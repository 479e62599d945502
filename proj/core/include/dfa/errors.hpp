// Copyright (c) 2026 dfa-mt authors
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

#ifndef DFA_ERRORS_HPP_
#define DFA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dfa {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data: bad UTF-8, bad file headers, dimension mismatches.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

/// A caller violated a documented precondition or an upstream stage handed
/// us data that breaks a contract (e.g. a CSU surface absent from its
/// sentence).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

/// Replay cache has no entry for the requested prompt hash.
class CacheMissError : public Error {
 public:
  CacheMissError(const std::string& what, std::string prompt_hash)
      : Error(what), prompt_hash_(std::move(prompt_hash)) {}
  const std::string& prompt_hash() const { return prompt_hash_; }

 private:
  std::string prompt_hash_;
};

/// HTTP transport failure. `retryable` distinguishes 5xx/timeouts from 4xx.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status, bool retryable)
      : Error(what), status_(status), retryable_(retryable) {}
  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

}  // namespace dfa

#endif  // DFA_ERRORS_HPP_
