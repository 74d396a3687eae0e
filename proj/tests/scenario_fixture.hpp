/*
 Copyright 2026 The qent Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// The two-qubit reference system shared by the dynamics, solver and
// acceptance suites.
#pragma once

#include "qent/dynamics.hpp"
#include "qent/linalg.hpp"
#include "qent/state.hpp"

namespace fixture {

using namespace qent;

inline HamiltonianSet reference_hamiltonians(double u_max = 1.0) {
  using namespace pauli;
  return HamiltonianSet(kron(z(), z()),
                        {kron(x(), y()) + kron(z(), z()), kron(x(), z()) + kron(z(), x()),
                         kron(y(), z()) + kron(z(), y())},
                        u_max);
}

inline DensityMatrix reference_initial_state(double epsilon = 0.01) {
  return perturbed_separable(density_from_pure(PureState::basis(0, 0)),
                             density_from_pure(bell_state(BellKind::PhiPlus)), epsilon);
}

}  // namespace fixture
