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

#include "ptdimer/fock.hpp"
#include "ptdimer/many_body.hpp"
#include "ptdimer/meanfield.hpp"

namespace ptdimer {

/// Many-body product state with all N0 particles in the single-particle
/// state c1|1> + c2|2>:
///   sum_m sqrt(binom(N0, m)) c1^(N0-m) c2^m |N0-m, m>.
/// Binomial weights are evaluated in log space so N0 in the hundreds is safe.
ManyBodyState embed_mean_field(const ModeAmplitudes& c, int N0, const FockBasis& basis);

/// cos(theta)|psi_g> + sin(theta)|psi_e>, renormalized.  The embedded
/// stationary states are not orthogonal for gamma != 0, so cos^2(theta) is
/// not an occupation probability.  Throws if the sum has norm below 1e-8.
ManyBodyState superposition(const ManyBodyState& psi_g, const ManyBodyState& psi_e, double theta);

/// Mean-field counterpart of superposition(): cos(theta) c_g + sin(theta) c_e,
/// renormalized.
ModeAmplitudes mean_field_superposition(const ModeAmplitudes& c_g, const ModeAmplitudes& c_e,
                                        double theta);

/// Pure state at polar angle `polar` on the xz great circle of a Bloch frame
/// spanned by e1 (north pole) and e2 (south pole):
///   cos(polar/2) e1 + sin(polar/2) e2.
ModeAmplitudes great_circle_state(const ModeAmplitudes& e1, const ModeAmplitudes& e2,
                                  double polar);

}  // namespace ptdimer
