//
// Copyright 2026 The ASAG Adversarial Insertion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ASAG_ERROR_H_
#define ASAG_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asag {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid caller-supplied argument or configuration.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed tagged-corpus line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A file was readable but its content does not follow the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Victim could not be reached after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Victim answered, but with something outside the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Two artifacts that must agree do not (e.g. query log vs. attack report).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace asag

#endif  // ASAG_ERROR_H_
