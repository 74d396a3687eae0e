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

#pragma once

#include "qent/linalg.hpp"
#include "qent/state.hpp"

namespace qent {

/// |psi> = sum_k sqrt(lambda_k) |u_k> (x) |v_k>. Coefficients are real and
/// non-negative; any phase lives in the basis_b columns.
struct SchmidtDecomposition {
  RealVector coefficients;  // sqrt(lambda_k), descending, length rank
  ComplexMatrix basis_a;    // dim_a x rank
  ComplexMatrix basis_b;    // dim_b x rank
  int rank = 0;
};

/// sqrt(2 * max(0, 1 - Tr(rho_a^2))) for a reduced density matrix.
/// Throws InvalidStateError when rho_a is not a valid state.
double concurrence_from_reduced(const ComplexMatrix& rho_a);

/// Same formula applied to Tr_B rho of the full state.
double concurrence_of(const DensityMatrix& rho);

/// 2 |a00 a11 - a01 a10|; two-qubit states only.
double concurrence_pure(const PureState& psi);

/// Wootters mixed-state concurrence max(0, l1 - l2 - l3 - l4), with l_i the
/// descending square roots of the spectrum of rho (sy sy) rho* (sy sy).
double wootters_concurrence(const DensityMatrix& rho);

/// Schmidt form via the spectrum of Tr_B |psi><psi|. Terms with
/// lambda_k <= 1e-10 are dropped from the rank.
SchmidtDecomposition schmidt_decompose(const PureState& psi);

/// sum_k c_k u_k (x) v_k as an amplitude vector.
ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s);

}  // namespace qent
