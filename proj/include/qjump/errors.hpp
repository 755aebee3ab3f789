// Copyright 2026 The qjump Authors
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

#include <stdexcept>
#include <string>

namespace qjump {

/// Error categories shared by the C++ core and the C API (see qjump.h).
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Convergence = 3,
  Aliasing = 4,
  StepSize = 5,
  Unphysical = 6,
  UndefinedWtd = 7,
  Io = 8,
  Internal = 99,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::StepSize: return "step_size";
    case ErrorCode::Unphysical: return "unphysical";
    case ErrorCode::UndefinedWtd: return "undefined_wtd";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(ErrorCode::DimensionMismatch, what) {}
};

/// Iterative procedure did not settle; `residual` is the last measured change.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::Convergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class AliasingError : public Error {
 public:
  explicit AliasingError(const std::string& what) : Error(ErrorCode::Aliasing, what) {}
};

class StepSizeError : public Error {
 public:
  explicit StepSizeError(const std::string& what) : Error(ErrorCode::StepSize, what) {}
};

/// Raised when the truncated cumulant hierarchy leaves the physical region.
class UnphysicalError : public Error {
 public:
  explicit UnphysicalError(const std::string& what) : Error(ErrorCode::Unphysical, what) {}
};

/// The waiting-time distribution is undefined (dark steady state).
class UndefinedWtdError : public Error {
 public:
  explicit UndefinedWtdError(const std::string& what) : Error(ErrorCode::UndefinedWtd, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace qjump
