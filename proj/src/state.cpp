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

#include "qent/state.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <utility>

namespace qent {

PureState::PureState(ComplexVector amplitudes, int dim_a, int dim_b)
    : amplitudes_(std::move(amplitudes)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a_ <= 0 || dim_b_ <= 0) {
    throw DimensionError("PureState: subsystem dimensions must be positive");
  }
  if (amplitudes_.size() != static_cast<Eigen::Index>(dim_a_) * dim_b_) {
    throw DimensionError("PureState: amplitude count does not match dim_a*dim_b");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "PureState: squared norm is " << norm2 << ", expected 1";
    throw InvalidStateError(os.str());
  }
}

PureState PureState::basis(int i, int j, int dim_a, int dim_b) {
  if (i < 0 || i >= dim_a || j < 0 || j >= dim_b) {
    throw DimensionError("PureState::basis: index out of range");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_a) * dim_b);
  v(i * dim_b + j) = 1.0;
  return PureState(std::move(v), dim_a, dim_b);
}

std::string density_violation(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) return "matrix is not square";
  if (!m.allFinite()) return "matrix has non-finite entries";
  if (!is_hermitian(m, DensityMatrix::kHermitianTol)) return "matrix is not Hermitian";
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > DensityMatrix::kTraceTol) {
    std::ostringstream os;
    os << "trace is " << tr << ", expected 1";
    return os.str();
  }
  const HermitianEigen eig = herm_eig(m, DensityMatrix::kHermitianTol);
  const double smallest = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (smallest < DensityMatrix::kEigenvalueFloor) {
    std::ostringstream os;
    os << "smallest eigenvalue is " << smallest << ", matrix is not positive semidefinite";
    return os.str();
  }
  return {};
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, int dim_a, int dim_b)
    : matrix_(std::move(matrix)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a_ <= 0 || dim_b_ <= 0 ||
      matrix_.rows() != static_cast<Eigen::Index>(dim_a_) * dim_b_ ||
      matrix_.cols() != matrix_.rows()) {
    throw DimensionError("DensityMatrix: matrix size does not match dim_a*dim_b");
  }
  if (auto why = density_violation(matrix_); !why.empty()) {
    throw InvalidStateError("DensityMatrix: " + why);
  }
}

DensityMatrix::DensityMatrix(Unchecked, ComplexMatrix matrix, int dim_a, int dim_b)
    : matrix_(std::move(matrix)), dim_a_(dim_a), dim_b_(dim_b) {}

DensityMatrix DensityMatrix::repaired(const ComplexMatrix& matrix, int dim_a, int dim_b,
                                      double* drift) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("DensityMatrix::repaired: not square");
  const double herm_defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  ComplexMatrix fixed = 0.5 * (matrix + matrix.adjoint());
  const double tr = fixed.trace().real();
  const double trace_defect = std::abs(tr - 1.0);
  if (!(tr > 0.0)) throw InvalidStateError("DensityMatrix::repaired: non-positive trace");
  fixed /= tr;
  const double worst = std::max(herm_defect, trace_defect);
  if (drift != nullptr) *drift = worst;
  if (worst > kRepairWarnLevel) {
    std::cerr << "warning: density matrix repair corrected drift of " << worst << "\n";
  }
  return DensityMatrix(std::move(fixed), dim_a, dim_b);
}

BellKind parse_bell_kind(std::string_view name) {
  if (name == "phi+" || name == "PhiPlus") return BellKind::PhiPlus;
  if (name == "phi-" || name == "PhiMinus") return BellKind::PhiMinus;
  if (name == "psi+" || name == "PsiPlus") return BellKind::PsiPlus;
  if (name == "psi-" || name == "PsiMinus") return BellKind::PsiMinus;
  throw std::invalid_argument("unknown Bell state '" + std::string(name) + "'");
}

std::string_view to_string(BellKind kind) {
  switch (kind) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
  }
  return "?";
}

PureState bell_state(BellKind kind) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus: v(0) = h; v(3) = h; break;
    case BellKind::PhiMinus: v(0) = h; v(3) = -h; break;
    case BellKind::PsiPlus: v(1) = h; v(2) = h; break;
    case BellKind::PsiMinus: v(1) = h; v(2) = -h; break;
  }
  return PureState(std::move(v), 2, 2);
}

DensityMatrix density_from_pure(const PureState& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint(), psi.dim_a(), psi.dim_b());
}

DensityMatrix perturbed_separable(const DensityMatrix& rho_sep, const DensityMatrix& delta_rho,
                                  double epsilon) {
  if (rho_sep.dim_a() != delta_rho.dim_a() || rho_sep.dim_b() != delta_rho.dim_b()) {
    throw DimensionError("perturbed_separable: states have different dimensions");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::out_of_range("perturbed_separable: epsilon must lie in [0, 1]");
  }
  if (epsilon == 0.0) return rho_sep;
  if (epsilon == 1.0) return delta_rho;
  return DensityMatrix((1.0 - epsilon) * rho_sep.matrix() + epsilon * delta_rho.matrix(),
                       rho_sep.dim_a(), rho_sep.dim_b());
}

double purity(const ComplexMatrix& rho) {
  return (rho * rho).trace().real();
}

double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

DensityMatrix unitary_conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw DimensionError("unitary_conjugate: propagator size does not match state");
  }
  return DensityMatrix(DensityMatrix::Unchecked{}, u * rho.matrix() * u.adjoint(), rho.dim_a(),
                       rho.dim_b());
}

}  // namespace qent
