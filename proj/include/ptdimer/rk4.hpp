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

namespace ptdimer {

/// Classical fourth-order Runge-Kutta stepper for autonomous systems.
///
/// State is any Eigen dense type (fixed or dynamic).  The derivative functor
/// is called as f(const State& y, State& dydt) and must fully overwrite dydt.
/// Stage buffers are kept between calls, so stepping a fixed-size problem
/// does not allocate.
template <typename State>
class Rk4 {
 public:
  template <typename Deriv>
  void step(State& y, double h, Deriv&& f) {
    f(y, k1_);
    tmp_ = y + (0.5 * h) * k1_;
    f(tmp_, k2_);
    tmp_ = y + (0.5 * h) * k2_;
    f(tmp_, k3_);
    tmp_ = y + h * k3_;
    f(tmp_, k4_);
    y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  /// Step from y into out, leaving y untouched.
  template <typename Deriv>
  void step_to(const State& y, State& out, double h, Deriv&& f) {
    out = y;
    step(out, h, f);
  }

 private:
  State k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace ptdimer
