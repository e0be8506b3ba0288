// Copyright 2026 The ptdimer Authors
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

namespace ptdimer {

/// Simulation produced a result that cannot be trusted physically.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gain jump left the truncated Fock basis.
class TruncationError : public PhysicsError {
 public:
  explicit TruncationError(const std::string& what, std::size_t aborted = 1)
      : PhysicsError(what), aborted_(aborted) {}
  std::size_t aborted() const { return aborted_; }

 private:
  std::size_t aborted_;
};

/// Density matrix developed a negative eigenvalue beyond tolerance.
class NonPhysicalStateError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

}  // namespace ptdimer
