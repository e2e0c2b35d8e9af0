#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "genland/error.hpp"

namespace genland {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative cutoff on eigenvalues of H†H (equivalently on σ²/σ_max²).
inline constexpr double kDefaultRcond = 1e-12;

/// Dense complex square matrix with a provenance label.
///
/// The universal carrier for Hamiltonians, normal operators and Sambe
/// matrices. Construction enforces squareness and finiteness, so every
/// function taking an Operator can rely on both.
class Operator {
 public:
  Operator() = default;

  explicit Operator(Matrix entries, std::string label = {})
      : entries_(std::move(entries)), label_(std::move(label)) {
    if (entries_.rows() != entries_.cols()) {
      throw DimensionError("Operator: matrix is " + std::to_string(entries_.rows()) + "x" +
                           std::to_string(entries_.cols()) + ", expected square");
    }
    if (entries_.rows() == 0) throw DimensionError("Operator: empty matrix");
    if (!entries_.allFinite()) throw RangeError("Operator: non-finite entry");
  }

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  double frobenius_norm() const { return entries_.norm(); }

  bool is_hermitian(double rel_tol = 0.0) const {
    const double scale = std::max(entries_.norm(), 1e-300);
    return (entries_ - entries_.adjoint()).norm() <= rel_tol * scale;
  }

 private:
  Matrix entries_;
  std::string label_;
};

struct SvdResult {
  RealVector singular_values;  // nonincreasing
  Matrix left_vectors;
  Matrix right_vectors;
};

/// Hermitian eigendecomposition: ascending real values, orthonormal columns.
struct HermitianEig {
  RealVector values;
  Matrix vectors;
};

/// Right eigenpairs of a general matrix. Columns are 2-norm normalized.
struct EigResult {
  Vector values;
  Matrix vectors;
  bool defective = false;
  std::string label;
};

struct PseudoSolveResult {
  Vector x;
  Index discarded_rank = 0;
  double cutoff = 0.0;
  bool degenerate = false;
};

/// H†H, symmetrized so the result is Hermitian bit-for-bit.
inline Operator normal_operator(const Operator& H) {
  Matrix product = H.matrix().adjoint() * H.matrix();
  Matrix sym = 0.5 * (product + product.adjoint());
  return Operator(std::move(sym), "normal(" + H.label() + ")");
}

inline HermitianEig eig_hermitian(const Operator& A, double rel_tol = 1e-10) {
  if (!A.is_hermitian(rel_tol)) {
    throw SymmetryError("eig_hermitian: input '" + A.label() + "' is not Hermitian");
  }
  Matrix sym = 0.5 * (A.matrix() + A.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw AccuracyError("eig_hermitian: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector eigenvalues_hermitian(const Operator& A, double rel_tol = 1e-10) {
  if (!A.is_hermitian(rel_tol)) {
    throw SymmetryError("eigenvalues_hermitian: input '" + A.label() + "' is not Hermitian");
  }
  Matrix sym = 0.5 * (A.matrix() + A.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw AccuracyError("eigenvalues_hermitian: no convergence");
  return solver.eigenvalues();
}

/// Right eigenpairs of an arbitrary square matrix.
///
/// Defective (or numerically near-defective) inputs are not rejected: the
/// eigenvector matrix is tested for near-singularity and the result is
/// flagged, leaving the residual contract as the usable guarantee.
inline EigResult eig_general(const Operator& H) {
  Eigen::ComplexEigenSolver<Matrix> solver(H.matrix(), true);
  if (solver.info() != Eigen::Success) throw AccuracyError("eig_general: solver did not converge");
  EigResult out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (Index k = 0; k < out.vectors.cols(); ++k) {
    const double n = out.vectors.col(k).norm();
    if (n > 0) out.vectors.col(k) /= n;
  }
  Eigen::JacobiSVD<Matrix> basis_svd(out.vectors);
  const RealVector& s = basis_svd.singularValues();
  const double smallest = s(s.size() - 1);
  out.defective = smallest < 1e-12 * std::max(1.0, s(0));
  out.label = H.label();
  if (out.defective) out.label += " [defective]";
  return out;
}

namespace detail {

// SVD of a Hermitian matrix from its eigendecomposition: σ = |λ|, V = Q,
// U = Q·sign(λ), columns reordered by nonincreasing σ.
inline SvdResult svd_from_hermitian_eig(const HermitianEig& eig) {
  const Index n = eig.values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(eig.values(a)) > std::abs(eig.values(b));
  });
  SvdResult out;
  out.singular_values.resize(n);
  out.left_vectors.resize(n, n);
  out.right_vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    const double lambda = eig.values(src);
    out.singular_values(k) = std::abs(lambda);
    out.right_vectors.col(k) = eig.vectors.col(src);
    out.left_vectors.col(k) = (lambda < 0 ? -1.0 : 1.0) * eig.vectors.col(src);
  }
  return out;
}

inline constexpr double kHermitianFastPathTol = 1e-14;

}  // namespace detail

/// Full SVD. Hermitian inputs are decomposed through their eigenbasis.
inline SvdResult svd(const Operator& H) {
  if (H.is_hermitian(detail::kHermitianFastPathTol)) {
    return detail::svd_from_hermitian_eig(eig_hermitian(H, detail::kHermitianFastPathTol));
  }
  Eigen::BDCSVD<Matrix> solver(H.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

inline RealVector singular_values(const Operator& H) {
  if (H.is_hermitian(detail::kHermitianFastPathTol)) {
    RealVector s = eigenvalues_hermitian(H, detail::kHermitianFastPathTol).cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    return s;
  }
  Eigen::BDCSVD<Matrix> solver(H.matrix());
  return solver.singularValues();
}

inline double smallest_singular_value(const Operator& H) {
  const RealVector s = singular_values(H);
  return s(s.size() - 1);
}

/// Moore–Penrose solve A⁺b for a Hermitian PSD matrix already diagonalized.
/// Eigenvalues at or below rcond·λ_max are treated as zero.
inline PseudoSolveResult pseudo_solve(const HermitianEig& eig, const Vector& b, double rcond) {
  if (!(rcond > 0.0 && rcond < 1.0)) throw RangeError("pseudo_solve: rcond must lie in (0,1)");
  if (b.size() != eig.values.size()) throw DimensionError("pseudo_solve: rhs length mismatch");
  const double lambda_max = eig.values.maxCoeff();
  PseudoSolveResult out;
  out.cutoff = rcond * std::max(lambda_max, 0.0);
  out.x = Vector::Zero(b.size());
  if (!(lambda_max > 0.0)) {
    out.discarded_rank = b.size();
    out.degenerate = true;
    return out;
  }
  const Vector coeffs = eig.vectors.adjoint() * b;
  Vector scaled = Vector::Zero(b.size());
  for (Index k = 0; k < b.size(); ++k) {
    if (eig.values(k) > out.cutoff) {
      scaled(k) = coeffs(k) / eig.values(k);
    } else {
      ++out.discarded_rank;
    }
  }
  out.x = eig.vectors * scaled;
  out.degenerate = out.discarded_rank == b.size();
  return out;
}

inline PseudoSolveResult pseudo_solve(const Operator& A, const Vector& b,
                                      double rcond = kDefaultRcond) {
  HermitianEig eig = eig_hermitian(A);
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  if (eig.values.minCoeff() < -1e-10 * scale) {
    throw SymmetryError("pseudo_solve: matrix '" + A.label() + "' is not positive semidefinite");
  }
  return pseudo_solve(eig, b, rcond);
}

}  // namespace genland
