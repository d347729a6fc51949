// Copyright 2026 The weakmeas developers
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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"

namespace weakmeas {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Normalized pure state over a finite basis. Immutable after construction.
/// A default-constructed instance is an empty placeholder (dimension 0);
/// every operation on one throws.
class StateVector {
 public:
  StateVector() = default;

  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i) const { return amplitudes_(i); }

  friend StateVector make_state(const CVector& amplitudes,
                                const Tolerances& tol);

 private:
  explicit StateVector(CVector amplitudes)
      : amplitudes_(std::move(amplitudes)) {}
  CVector amplitudes_;
};

/// Normalizes `amplitudes` to unit norm. Throws ZeroVector when the squared
/// norm underflows (there is nothing to normalize).
inline StateVector make_state(const CVector& amplitudes,
                              const Tolerances& tol = default_tolerances()) {
  (void)tol;
  if (amplitudes.size() == 0) {
    throw DimensionMismatch("make_state: empty amplitude sequence");
  }
  const double norm2 = amplitudes.squaredNorm();
  if (!(norm2 > 1e-300)) {
    throw ZeroVector("make_state: all amplitudes vanish");
  }
  return StateVector(amplitudes / std::sqrt(norm2));
}

inline StateVector make_state(std::initializer_list<Complex> amplitudes,
                              const Tolerances& tol = default_tolerances()) {
  CVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index k = 0;
  for (const Complex& a : amplitudes) v(k++) = a;
  return make_state(v, tol);
}

/// <bra|ket>: conjugate-linear in the first argument.
inline Complex inner(const StateVector& bra, const StateVector& ket) {
  if (bra.dimension() != ket.dimension()) {
    throw DimensionMismatch("inner: dimensions " +
                            std::to_string(bra.dimension()) + " vs " +
                            std::to_string(ket.dimension()));
  }
  return bra.amplitudes().dot(ket.amplitudes());
}

/// Indices of eigenvectors sharing one (numerically merged) eigenvalue.
struct EigenGroup {
  double value = 0.0;
  std::vector<int> indices;
};

/// Hermitian observable with a cached spectral decomposition.
///
/// Eigenvalues are sorted ascending; eigenvectors form an orthonormal basis
/// (column i of `eigenvectors()` belongs to `eigenvalue(i)`). Eigenvalues
/// whose difference is below `tol.degeneracy * max(1, spectral scale)` are
/// merged into one EigenGroup, so degenerate spectra are handled by group.
class Observable {
 public:
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int i) const { return eigenvalues_(i); }
  const CMatrix& eigenvectors() const { return eigenvectors_; }
  const std::vector<EigenGroup>& groups() const { return groups_; }
  int group_count() const { return static_cast<int>(groups_.size()); }

  /// Projector onto the eigenspace of group g.
  CMatrix group_projector(int g) const {
    const EigenGroup& grp = groups_.at(static_cast<std::size_t>(g));
    CMatrix proj = CMatrix::Zero(matrix_.rows(), matrix_.cols());
    for (int i : grp.indices) {
      proj += eigenvectors_.col(i) * eigenvectors_.col(i).adjoint();
    }
    return proj;
  }

  /// Component of `v` inside the eigenspace of group g (unnormalized).
  CVector project_group(int g, const CVector& v) const {
    const EigenGroup& grp = groups_.at(static_cast<std::size_t>(g));
    CVector out = CVector::Zero(v.size());
    for (int i : grp.indices) {
      out += eigenvectors_.col(i) * eigenvectors_.col(i).dot(v);
    }
    return out;
  }

  friend Observable make_observable(const CMatrix& matrix,
                                    const Tolerances& tol);

 private:
  Observable() = default;
  CMatrix matrix_;
  Eigen::VectorXd eigenvalues_;
  CMatrix eigenvectors_;
  std::vector<EigenGroup> groups_;
};

/// Spectral decomposition of a Hermitian matrix, with degeneracy grouping.
/// Throws NotHermitian when max |M - M^dagger| exceeds tol.hermiticity and
/// DimensionMismatch for non-square or empty input.
inline Observable make_observable(const CMatrix& matrix,
                                  const Tolerances& tol = default_tolerances()) {
  if (matrix.rows() != matrix.cols()) {
    throw DimensionMismatch("make_observable: matrix is " +
                            std::to_string(matrix.rows()) + "x" +
                            std::to_string(matrix.cols()));
  }
  if (matrix.rows() == 0) {
    throw DimensionMismatch("make_observable: empty matrix");
  }
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.hermiticity) {
    throw NotHermitian("make_observable: max |M - M^dagger| = " +
                       std::to_string(asym));
  }

  Observable obs;
  // Work with the Hermitian average so the decomposition is exact for the
  // matrix actually stored.
  obs.matrix_ = 0.5 * (matrix + matrix.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(obs.matrix_);
  if (solver.info() != Eigen::Success) {
    throw Error("make_observable: eigendecomposition failed");
  }
  obs.eigenvalues_ = solver.eigenvalues();
  obs.eigenvectors_ = solver.eigenvectors();

  const double scale =
      std::max(1.0, obs.eigenvalues_.cwiseAbs().maxCoeff());
  const double merge = tol.degeneracy * scale;
  for (int i = 0; i < obs.eigenvalues_.size(); ++i) {
    if (!obs.groups_.empty() &&
        std::abs(obs.eigenvalues_(i) - obs.groups_.back().value) <= merge) {
      obs.groups_.back().indices.push_back(i);
    } else {
      obs.groups_.push_back(EigenGroup{obs.eigenvalues_(i), {i}});
    }
  }
  return obs;
}

/// Rank-|indices| projector onto the span of the given basis states,
/// as a 0/1-eigenvalue Observable.
inline Observable projector(const std::vector<int>& basis_indices,
                            int dimension,
                            const Tolerances& tol = default_tolerances()) {
  if (dimension < 1) {
    throw DimensionMismatch("projector: dimension must be >= 1");
  }
  CMatrix m = CMatrix::Zero(dimension, dimension);
  for (int idx : basis_indices) {
    if (idx < 0 || idx >= dimension) {
      throw IndexOutOfRange("projector: index " + std::to_string(idx) +
                            " outside dimension " + std::to_string(dimension));
    }
    m(idx, idx) = 1.0;
  }
  return make_observable(m, tol);
}

inline Observable identity_observable(
    int dimension, const Tolerances& tol = default_tolerances()) {
  if (dimension < 1) {
    throw DimensionMismatch("identity_observable: dimension must be >= 1");
  }
  return make_observable(CMatrix::Identity(dimension, dimension), tol);
}

namespace detail {

inline void check_spin(double j) {
  const double twoj = 2.0 * j;
  if (!(j >= 0.0) || std::abs(twoj - std::round(twoj)) > 1e-9) {
    throw InvalidSpin("spin quantum number must be a nonnegative half-integer, got " +
                      std::to_string(j));
  }
}

inline std::array<double, 3> unit_axis(const std::array<double, 3>& axis,
                                       const Tolerances& tol) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] +
                             axis[2] * axis[2]);
  if (std::abs(n - 1.0) > tol.unit_axis) {
    throw InvalidSpin("axis must have unit norm, got ||axis|| = " +
                      std::to_string(n));
  }
  return axis;
}

/// Raw spin component matrices in the m = +j, +j-1, ..., -j basis ordering
/// (hbar = 1), built from the ladder elements sqrt(j(j+1) - m(m+-1)).
inline std::array<CMatrix, 3> spin_matrices(double j) {
  check_spin(j);
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  CMatrix raise = CMatrix::Zero(dim, dim);  // S+
  for (int k = 1; k < dim; ++k) {
    const double m = j - k;  // S+|j,m> = c |j,m+1>, row k-1 holds m+1
    raise(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMatrix lower = raise.adjoint();
  CMatrix sz = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) sz(k, k) = j - k;
  const Complex i(0.0, 1.0);
  return {0.5 * (raise + lower), -0.5 * i * (raise - lower), sz};
}

}  // namespace detail

/// Spin component n.S for spin j along the given unit axis; eigenvalues are
/// {-j, ..., +j} in units of hbar = 1.
inline Observable spin_operator(double j, const std::array<double, 3>& axis,
                                const Tolerances& tol = default_tolerances()) {
  const auto n = detail::unit_axis(axis, tol);
  const auto s = detail::spin_matrices(j);
  return make_observable(n[0] * s[0] + n[1] * s[1] + n[2] * s[2], tol);
}

/// Extreme (highest-weight) spin state: the eigenstate of n.S with
/// eigenvalue +j. Phase convention: the largest-magnitude component is made
/// real positive. The construction is checked against ||(n.S - j) psi||.
inline StateVector spin_coherent_state(
    double j, const std::array<double, 3>& axis,
    const Tolerances& tol = default_tolerances()) {
  const Observable op = spin_operator(j, axis, tol);
  // Ascending eigenvalues: the +j state is the last column.
  CVector v = op.eigenvectors().col(op.dimension() - 1);
  int pivot = 0;
  double best = -1.0;
  for (int k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > best) {
      best = std::abs(v(k));
      pivot = k;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
  const double residual = (op.matrix() * v - j * v).norm();
  if (residual > tol.coherent_residual) {
    throw Error("spin_coherent_state: residual " + std::to_string(residual));
  }
  return make_state(v, tol);
}

/// Kronecker product of states; the left factor is the slow index.
inline StateVector tensor(const StateVector& a, const StateVector& b,
                          const Tolerances& tol = default_tolerances()) {
  const CVector& u = a.amplitudes();
  const CVector& v = b.amplitudes();
  CVector out(u.size() * v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out.segment(i * v.size(), v.size()) = u(i) * v;
  }
  return make_state(out, tol);
}

/// Kronecker product of observables.
inline Observable op_tensor(const Observable& a, const Observable& b,
                            const Tolerances& tol = default_tolerances()) {
  const CMatrix& ma = a.matrix();
  const CMatrix& mb = b.matrix();
  CMatrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index k = 0; k < ma.cols(); ++k) {
      out.block(i * mb.rows(), k * mb.cols(), mb.rows(), mb.cols()) =
          ma(i, k) * mb;
    }
  }
  return make_observable(out, tol);
}

/// <psi|A|psi>, guaranteed real for Hermitian A.
inline double expectation(const Observable& a, const StateVector& psi) {
  if (a.dimension() != psi.dimension()) {
    throw DimensionMismatch("expectation: dimensions " +
                            std::to_string(a.dimension()) + " vs " +
                            std::to_string(psi.dimension()));
  }
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes()).real();
}

/// Born weight of each eigengroup: ||Pi_g psi||^2, indexed like groups().
inline std::vector<double> born_weights(const Observable& a,
                                        const StateVector& psi) {
  if (a.dimension() != psi.dimension()) {
    throw DimensionMismatch("born_weights: dimensions " +
                            std::to_string(a.dimension()) + " vs " +
                            std::to_string(psi.dimension()));
  }
  std::vector<double> weights;
  weights.reserve(a.groups().size());
  for (const EigenGroup& g : a.groups()) {
    double w = 0.0;
    for (int i : g.indices) {
      w += std::norm(a.eigenvectors().col(i).dot(psi.amplitudes()));
    }
    weights.push_back(w);
  }
  return weights;
}

inline Observable pauli_x(const Tolerances& tol = default_tolerances()) {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return make_observable(m, tol);
}

inline Observable pauli_y(const Tolerances& tol = default_tolerances()) {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return make_observable(m, tol);
}

inline Observable pauli_z(const Tolerances& tol = default_tolerances()) {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return make_observable(m, tol);
}

}  // namespace weakmeas
