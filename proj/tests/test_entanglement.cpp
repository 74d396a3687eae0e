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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qent/entanglement.hpp"

using namespace qent;

TEST_CASE("concurrence_from_reduced") {
  CHECK(concurrence_from_reduced(ComplexMatrix::Identity(2, 2) / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK(concurrence_from_reduced(pure) == 0.0);

  // Tr(rho^2) = 0.75 with diag(p, 1-p): p = (1 + sqrt(0.5)) / 2.
  const double p = (1.0 + std::sqrt(0.5)) / 2.0;
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r.diagonal() << p, 1.0 - p;
  CHECK(concurrence_from_reduced(r) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(concurrence_from_reduced(ComplexMatrix::Identity(2, 2)), InvalidStateError);
}

TEST_CASE("concurrence_pure") {
  CHECK(concurrence_pure(bell_state(BellKind::PhiPlus)) == doctest::Approx(1.0));
  CHECK(concurrence_pure(PureState::basis(0, 0)) == 0.0);
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::sqrt(0.8);
  v(3) = std::sqrt(0.2);
  CHECK(concurrence_pure(PureState(v, 2, 2)) == doctest::Approx(0.8).epsilon(1e-14));

  ComplexVector w = ComplexVector::Zero(6);
  w(0) = 1.0;
  CHECK_THROWS_AS(concurrence_pure(PureState(w, 2, 3)), DimensionError);
}

TEST_CASE("wootters_concurrence") {
  CHECK(wootters_concurrence(density_from_pure(bell_state(BellKind::PsiMinus))) ==
        doctest::Approx(1.0).epsilon(1e-10));

  ComplexMatrix mix = ComplexMatrix::Zero(4, 4);
  mix(0, 0) = mix(3, 3) = 0.5;
  CHECK(wootters_concurrence(DensityMatrix(mix, 2, 2)) == doctest::Approx(0.0).epsilon(1e-12));

  const double p = 0.9;
  const ComplexMatrix psi = density_from_pure(bell_state(BellKind::PsiMinus)).matrix();
  const DensityMatrix werner(p * psi + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0, 2, 2);
  const double closed_form = std::max(0.0, (3.0 * p - 1.0) / 2.0);
  CHECK(closed_form == doctest::Approx(0.85));
  CHECK(oracle::wootters_direct(werner.matrix()) == doctest::Approx(closed_form).epsilon(1e-10));
  CHECK(wootters_concurrence(werner) == doctest::Approx(closed_form).epsilon(1e-10));

  const DensityMatrix big(ComplexMatrix::Identity(6, 6) / 6.0, 2, 3);
  CHECK_THROWS_AS(wootters_concurrence(big), DimensionError);
}

TEST_CASE("Wootters agrees with the direct non-Hermitian eigen route on mixed states") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix r(oracle::random_density(rng, 4), 2, 2);
    CHECK(std::abs(wootters_concurrence(r) - oracle::wootters_direct(r.matrix())) < 1e-8);
  }
}

TEST_CASE("pure-state concurrence routes agree") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const PureState psi(oracle::random_state(rng, 4), 2, 2);
    const double det = concurrence_pure(psi);
    const auto rho = density_from_pure(psi);
    CHECK(std::abs(concurrence_from_reduced(rho.reduced_a()) - det) < 1e-10);
    CHECK(std::abs(wootters_concurrence(rho) - det) < 1e-9);
  }
}

TEST_CASE("concurrence is invariant under local unitaries") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix r(oracle::random_density(rng, 4), 2, 2);
    const ComplexMatrix u = kron(oracle::random_unitary(rng, 2), oracle::random_unitary(rng, 2));
    const DensityMatrix moved = DensityMatrix::repaired(u * r.matrix() * u.adjoint(), 2, 2);
    CHECK(std::abs(concurrence_of(moved) - concurrence_of(r)) < 1e-10);
  }
}

TEST_CASE("schmidt_decompose examples") {
  const auto prod = schmidt_decompose(PureState::basis(0, 1));
  CHECK(prod.rank == 1);
  REQUIRE(prod.coefficients.size() == 1);
  CHECK(prod.coefficients(0) == doctest::Approx(1.0));

  const auto bell = schmidt_decompose(bell_state(BellKind::PhiPlus));
  CHECK(bell.rank == 2);
  CHECK(bell.coefficients(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(bell.coefficients(1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("Schmidt decomposition invariants on random states") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int da = 2 + trial % 2;
    const int db = 2 + (trial / 2) % 2;
    const PureState psi(oracle::random_state(rng, da * db), da, db);
    const auto s = schmidt_decompose(psi);
    CHECK(std::abs(s.coefficients.squaredNorm() - 1.0) < 1e-10);
    for (int k = 1; k < s.rank; ++k) CHECK(s.coefficients(k - 1) >= s.coefficients(k));
    CHECK(max_abs_diff(s.basis_a.adjoint() * s.basis_a, ComplexMatrix::Identity(s.rank, s.rank)) < 1e-10);
    CHECK(max_abs_diff(s.basis_b.adjoint() * s.basis_b, ComplexMatrix::Identity(s.rank, s.rank)) < 1e-10);
    CHECK((schmidt_reconstruct(s) - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);

    // lambda_k are the reduced-state eigenvalues.
    const auto ra = density_from_pure(psi).reduced_a();
    const auto e = herm_eig(ra);
    for (int k = 0; k < s.rank; ++k) CHECK(std::abs(s.coefficients(k) * s.coefficients(k) - e.eigenvalues(k)) < 1e-10);
  }
}
