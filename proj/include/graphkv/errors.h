// Copyright 2026 The GraphKV Authors.
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

#ifndef GRAPHKV_ERRORS_H_
#define GRAPHKV_ERRORS_H_

#include <stdexcept>
#include <string>

namespace graphkv {

// Caller passed a value outside an operation's domain (bad length, k > n,
// window longer than the query block, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration is internally inconsistent, e.g. a query-based similarity
// kind requested on a cache without aligned queries.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A postcondition the library itself is responsible for did not hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadMagicError : public IoError {
 public:
  using IoError::IoError;
};

class VersionMismatchError : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace graphkv

#endif  // GRAPHKV_ERRORS_H_
