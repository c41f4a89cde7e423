// Copyright 2026 The gpsys Authors. All Rights Reserved.
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
// =============================================================================

#pragma once

#include <stdexcept>
#include <string>

namespace gpsys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (dimension mismatch, axis out of range, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// The noisy joint covariance is not numerically positive definite.
class ConditioningError : public Error {
 public:
  ConditioningError(int index, double pivot);

  int index() const { return index_; }
  double pivot() const { return pivot_; }

 private:
  int index_;
  double pivot_;
};

class DegenerateUtilityError : public Error {
 public:
  using Error::Error;
};

class ExhaustedCandidatesError : public Error {
 public:
  using Error::Error;
};

class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace gpsys
