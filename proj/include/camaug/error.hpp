/**
 * Copyright 2026 The camaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace camaug {

/// Base of every error raised by the library. `module()` names the
/// subsystem that raised it so the CLI can report it with context.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string &what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string &module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed input text. `offset()` is the byte offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t offset)
      : Error("annotations", what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Camera id extraction or lighting tagging failed.
class TaggingError : public Error {
 public:
  explicit TaggingError(const std::string &what) : Error("indexer", what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string &what) : Error("geometry", what) {}
};

}  // namespace camaug
