// Copyright 2026 The fwadv Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwadv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition, schema or shape check refused the input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A binary or text file could not be decoded. Carries the byte offset
/// (or JSON position) where decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A serialized artifact was written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN or infinity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fwadv
