// Copyright 2026 The sblvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SBL_ERRORS_HPP_
#define SBL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sbl {

// Base class for all library failures that are the caller's fault.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario or group configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested packing does not fit the scalar field.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace sbl

#endif  // SBL_ERRORS_HPP_
