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

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;

/// Thrown when matrix shapes are incompatible with an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an input is required to be Hermitian and is not.
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// Entrywise comparison; real and imaginary parts are checked separately.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kAlgebraTol);

/// Largest |a_ij - b_ij| over all entries. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tol = kEigenTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the second factor of a (dim_a*dim_b)-square matrix, with
/// row-major basis ordering |a>|b>.
ComplexMatrix partial_trace_b(const ComplexMatrix& m, int dim_a, int dim_b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian eigendecomposition.
struct HermitianEigen {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors;  // orthonormal columns, same order
};

/// Eigenvalues are sorted descending. Within a degenerate group (within
/// kEigenTol) columns are ordered by descending lexicographic comparison of
/// the first component where they differ, and each column is phased so its first non-negligible
/// component is real and positive.
HermitianEigen herm_eig(const ComplexMatrix& h, double hermitian_tol = kEigenTol);

/// exp(-i h dt) for Hermitian h, built from herm_eig.
ComplexMatrix propagator(const ComplexMatrix& h, double dt);

}  // namespace qent
