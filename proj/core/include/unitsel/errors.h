/*
 * Copyright 2026 The Unitsel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UNITSEL_ERRORS_H_
#define UNITSEL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace unitsel {

// Bad input values: malformed configs, mismatched widths, ineligible cells.
// The command line tool maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

class ConfigError : public ValidationError {
 public:
  explicit ConfigError(const std::string& what) : ValidationError(what) {}
};

// A cell whose counts leave a probability undefined (an empty arm).
class IneligibleCellError : public ValidationError {
 public:
  explicit IneligibleCellError(const std::string& what)
      : ValidationError(what) {}
};

// Unreadable or unwritable files. Exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace unitsel

#endif  // UNITSEL_ERRORS_H_
