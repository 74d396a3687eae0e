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

#include "qent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace qent {

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0,
       1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  m << 0.0, -i,
       i, 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0,
       0.0, -1.0;
  return m;
}

}  // namespace pauli

namespace {

void require_well_formed(const ComplexMatrix& m, const char* what) {
  if (m.rows() <= 0 || m.cols() <= 0) {
    throw DimensionError(std::string(what) + ": empty matrix");
  }
}

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  require_well_formed(a, what);
  require_well_formed(b, what);
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError(std::string(what) + ": operands must be square with equal size");
  }
}

// Descending lexicographic order on (real, imag) of the first component
// that differs, so degenerate subspaces come out as close to the standard
// basis as the phasing allows.
bool column_before(const ComplexMatrix& v, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const Complex x = v(r, a);
    const Complex y = v(r, b);
    if (std::abs(x.real() - y.real()) > kEigenTol) return x.real() > y.real();
    if (std::abs(x.imag() - y.imag()) > kEigenTol) return x.imag() > y.imag();
  }
  return false;
}

}  // namespace

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j).real() - b(i, j).real()) > tol) return false;
      if (std::abs(a(i, j).imag() - b(i, j).imag()) > tol) return false;
    }
  }
  return true;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return approx_equal(m, m.adjoint(), tol);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_well_formed(a, "kron");
  require_well_formed(b, "kron");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_b(const ComplexMatrix& m, int dim_a, int dim_b) {
  if (dim_a <= 0 || dim_b <= 0) {
    throw DimensionError("partial_trace_b: subsystem dimensions must be positive");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError("partial_trace_b: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(d) +
                         "x" + std::to_string(d));
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i) {
    for (int j = 0; j < dim_a; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < dim_b; ++k) acc += m(i * dim_b + k, j * dim_b + k);
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b, "commutator");
  return a * b - b * a;
}

HermitianEigen herm_eig(const ComplexMatrix& h, double hermitian_tol) {
  require_well_formed(h, "herm_eig");
  if (h.rows() != h.cols()) throw DimensionError("herm_eig: matrix must be square");
  if (!is_hermitian(h, hermitian_tol)) throw NotHermitianError("herm_eig: matrix is not Hermitian");

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }

  const Eigen::Index n = h.rows();
  ComplexMatrix vecs = solver.eigenvectors();
  const RealVector& vals = solver.eigenvalues();

  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double mag = std::abs(vecs(r, c));
      if (mag > kEigenTol) {
        vecs.col(c) *= std::conj(vecs(r, c)) / mag;
        break;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > kEigenTol) return vals(a) > vals(b);
    return column_before(vecs, a, b);
  });

  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = vals(order[static_cast<size_t>(k)]);
    out.eigenvectors.col(k) = vecs.col(order[static_cast<size_t>(k)]);
  }
  return out;
}

ComplexMatrix propagator(const ComplexMatrix& h, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagator: dt must be positive");
  const HermitianEigen eig = herm_eig(h);
  const Eigen::Index n = h.rows();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::exp(Complex(0.0, -eig.eigenvalues(k) * dt));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace qent
