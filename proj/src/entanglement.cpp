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

#include "qent/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace qent {

namespace {

constexpr double kSchmidtRankTol = 1e-10;

void require_two_qubits(int dim_a, int dim_b, const char* what) {
  if (dim_a != 2 || dim_b != 2) {
    throw DimensionError(std::string(what) + ": requires a two-qubit state");
  }
}

}  // namespace

double concurrence_from_reduced(const ComplexMatrix& rho_a) {
  if (auto why = density_violation(rho_a); !why.empty()) {
    throw InvalidStateError("concurrence_from_reduced: " + why);
  }
  return std::sqrt(2.0 * std::max(0.0, 1.0 - purity(rho_a)));
}

double concurrence_of(const DensityMatrix& rho) { return concurrence_from_reduced(rho.reduced_a()); }

double concurrence_pure(const PureState& psi) {
  require_two_qubits(psi.dim_a(), psi.dim_b(), "concurrence_pure");
  const Complex det = psi.amplitude(0, 0) * psi.amplitude(1, 1) -
                      psi.amplitude(0, 1) * psi.amplitude(1, 0);
  return 2.0 * std::abs(det);
}

double wootters_concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho.dim_a(), rho.dim_b(), "wootters_concurrence");
  // With rho = W W^dagger, the square roots of the eigenvalues of rho * tilde(rho)
  // are the singular values of the symmetric matrix W^T (sy sy) W.
  const HermitianEigen eig = herm_eig(rho.matrix());
  RealVector weights(4);
  for (int k = 0; k < 4; ++k) weights(k) = std::sqrt(std::max(0.0, eig.eigenvalues(k)));
  const ComplexMatrix w = eig.eigenvectors * weights.asDiagonal();
  const ComplexMatrix tau = w.transpose() * kron(pauli::y(), pauli::y()) * w;
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();
  std::array<double, 4> l{};
  for (int k = 0; k < 4; ++k) l[k] = sv(k);
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  const int da = psi.dim_a();
  const int db = psi.dim_b();
  ComplexMatrix amp(da, db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) amp(i, j) = psi.amplitude(i, j);
  }
  const ComplexMatrix rho_a = amp * amp.adjoint();
  const HermitianEigen eig = herm_eig(rho_a);

  int rank = 0;
  while (rank < da && eig.eigenvalues(rank) > kSchmidtRankTol) ++rank;

  SchmidtDecomposition out;
  out.rank = rank;
  out.coefficients.resize(rank);
  out.basis_a.resize(da, rank);
  out.basis_b.resize(db, rank);
  for (int k = 0; k < rank; ++k) {
    const double c = std::sqrt(eig.eigenvalues(k));
    out.coefficients(k) = c;
    out.basis_a.col(k) = eig.eigenvectors.col(k);
    out.basis_b.col(k) = amp.transpose() * eig.eigenvectors.col(k).conjugate() / c;
  }
  return out;
}

ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s) {
  const Eigen::Index da = s.basis_a.rows();
  const Eigen::Index db = s.basis_b.rows();
  ComplexVector v = ComplexVector::Zero(da * db);
  for (int k = 0; k < s.rank; ++k) {
    v += s.coefficients(k) * kron(s.basis_a.col(k), s.basis_b.col(k));
  }
  return v;
}

}  // namespace qent
