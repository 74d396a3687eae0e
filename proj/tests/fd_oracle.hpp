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

// Finite-difference objective oracle: propagates with Eigen's Pade matrix
// exponential and ignores control bounds so cells can be nudged past them.
#pragma once

#include <cmath>

#include "oracles.hpp"
#include "qent/dynamics.hpp"

namespace oracle {

inline double objective_by_expm(const qent::HamiltonianSet& hs, const ComplexMatrix& rho0,
                                const Eigen::MatrixXd& values, double tf, double gamma) {
  const int n = static_cast<int>(values.cols());
  const double dt = tf / n;
  ComplexMatrix rho = rho0;
  for (int j = 0; j < n; ++j) {
    ComplexMatrix h = hs.h0();
    for (int k = 0; k < hs.channels(); ++k) h += values(k, j) * hs.control(k);
    const ComplexMatrix u = expm_propagator(h, dt);
    rho = u * rho * u.adjoint();
  }
  return -reduced_concurrence(rho) + gamma * tf;
}

/// (J(u + delta e_kj) - J(u - delta e_kj)) / (2 delta)
inline double central_difference(const qent::HamiltonianSet& hs, const ComplexMatrix& rho0,
                                 const Eigen::MatrixXd& values, double tf, double gamma, int channel,
                                 int cell, double delta = 1e-5) {
  Eigen::MatrixXd up = values;
  Eigen::MatrixXd down = values;
  up(channel, cell) += delta;
  down(channel, cell) -= delta;
  return (objective_by_expm(hs, rho0, up, tf, gamma) - objective_by_expm(hs, rho0, down, tf, gamma)) /
         (2.0 * delta);
}

}  // namespace oracle
