/*
 * Copyright 2026 The CPS V2V Simulator Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cps {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bumper-to-bumper gap became nonpositive.
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. f_inv(1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration failed validation. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Control message buffer could not be decoded.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// A lookup for state that does not exist (unknown segment, missing estimate).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Output could not be written or input files could not be read.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cps
