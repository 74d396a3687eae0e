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

#include <stdexcept>
#include <string>
#include <string_view>

#include "qent/linalg.hpp"

namespace qent {

/// Thrown when a state violates normalization, Hermiticity, trace or
/// positivity requirements.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized bipartite pure state. Amplitudes are ordered |00>, |01>, ...
/// with the A index major.
class PureState {
 public:
  static constexpr double kNormTol = 1e-12;

  PureState(ComplexVector amplitudes, int dim_a, int dim_b);

  /// |i>_A |j>_B
  static PureState basis(int i, int j, int dim_a = 2, int dim_b = 2);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i, int j) const { return amplitudes_(i * dim_b_ + j); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }

 private:
  ComplexVector amplitudes_;
  int dim_a_;
  int dim_b_;
};

/// Hermitian, unit-trace, positive-semidefinite state of the full system.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-9;
  /// Drift above this level is reported by repair().
  static constexpr double kRepairWarnLevel = 1e-8;

  /// Validates; throws InvalidStateError on violation.
  DensityMatrix(ComplexMatrix matrix, int dim_a, int dim_b);

  /// Hermitizes and renormalizes the trace before validating. Meant for
  /// accumulated roundoff on long trajectories, not for arbitrary input.
  /// `drift` receives the larger of the Hermiticity and trace defects.
  static DensityMatrix repaired(const ComplexMatrix& matrix, int dim_a, int dim_b,
                                double* drift = nullptr);

  const ComplexMatrix& matrix() const { return matrix_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Tr_B rho.
  ComplexMatrix reduced_a() const { return partial_trace_b(matrix_, dim_a_, dim_b_); }

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, ComplexMatrix matrix, int dim_a, int dim_b);

  ComplexMatrix matrix_;
  int dim_a_;
  int dim_b_;

  friend DensityMatrix unitary_conjugate(const DensityMatrix&, const ComplexMatrix&);
};

/// Why `m` fails validation as a density matrix, or empty when it passes.
std::string density_violation(const ComplexMatrix& m);

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

BellKind parse_bell_kind(std::string_view name);
std::string_view to_string(BellKind kind);

PureState bell_state(BellKind kind);

DensityMatrix density_from_pure(const PureState& psi);

/// (1 - epsilon) * rho_sep + epsilon * delta_rho
DensityMatrix perturbed_separable(const DensityMatrix& rho_sep, const DensityMatrix& delta_rho,
                                  double epsilon);

/// Tr(rho^2)
double purity(const DensityMatrix& rho);
double purity(const ComplexMatrix& rho);

/// U rho U^dagger without revalidation. U must be unitary; the result is
/// exactly as physical as the input up to roundoff.
DensityMatrix unitary_conjugate(const DensityMatrix& rho, const ComplexMatrix& u);

}  // namespace qent
