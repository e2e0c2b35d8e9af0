#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genland/linalg.hpp"
#include "support/oracles.hpp"

using namespace genland;
namespace gt = genland::testing;

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Operator, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(Operator(Matrix::Zero(2, 3)), DimensionError);
  EXPECT_THROW(Operator(Matrix::Zero(0, 0)), DimensionError);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(Operator{m}, RangeError);
}

TEST(NormalOperator, NilpotentAndIdentity) {
  const Operator n = normal_operator(Operator(mat2(0, 1, 0, 0)));
  EXPECT_EQ(n.matrix(), mat2(0, 0, 0, 1));
  const Operator i3 = normal_operator(Operator(Matrix::Identity(3, 3)));
  EXPECT_EQ(i3.matrix(), Matrix::Identity(3, 3));
}

TEST(NormalOperator, MatchesTripleLoop) {
  std::mt19937_64 rng(11);
  const Matrix h = gt::random_complex(6, 6, rng);
  const Matrix got = normal_operator(Operator(h)).matrix();
  const Matrix want = gt::adjoint_product_loop(h, h);
  EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(normal_operator(Operator(h)).is_hermitian(0.0));
}

TEST(EigHermitian, DiagonalAndPauli) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const HermitianEig e = eig_hermitian(Operator(d));
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 2.0, 1e-14);
  EXPECT_NEAR(e.values(2), 3.0, 1e-14);

  const HermitianEig p = eig_hermitian(Operator(mat2(0, 1, 1, 0)));
  EXPECT_NEAR(p.values(0), -1.0, 1e-14);
  EXPECT_NEAR(p.values(1), 1.0, 1e-14);
  // eigenvector of −1 is (1,−1)/√2 up to phase
  EXPECT_NEAR(std::abs(p.vectors(0, 0) + p.vectors(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.vectors(0, 0)), std::sqrt(0.5), 1e-14);
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_THROW(eig_hermitian(Operator(mat2(0, 1, 0, 0))), SymmetryError);
}

TEST(EigHermitian, MatchesCharacteristicPolynomialRoots) {
  std::mt19937_64 rng(5);
  const Matrix a = gt::random_hermitian(8, rng);
  const std::vector<double> roots = gt::char_poly_roots(a);
  ASSERT_EQ(roots.size(), 8u);
  const HermitianEig e = eig_hermitian(Operator(a));
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(e.values(k), roots[static_cast<std::size_t>(k)], 1e-8);
  EXPECT_LE((e.vectors.adjoint() * e.vectors - Matrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(EigGeneral, JordanBlockIsFlagged) {
  const EigResult e = eig_general(Operator(mat2(0, 1, 0, 0), "jordan"));
  EXPECT_NEAR(std::abs(e.values(0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e.values(1)), 0.0, 1e-12);
  EXPECT_TRUE(e.defective);
  EXPECT_NE(e.label.find("defective"), std::string::npos);
}

TEST(EigGeneral, HatanoNelsonSimilarityOracle) {
  Matrix h = Matrix::Zero(4, 4);
  for (int j = 0; j < 3; ++j) {
    h(j + 1, j) = 0.25;
    h(j, j + 1) = 1.0;
  }
  const EigResult e = eig_general(Operator(h));
  std::vector<double> got, want;
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(e.values(k).imag(), 0.0, 1e-10);
    got.push_back(e.values(k).real());
    want.push_back(2.0 * 0.5 * std::cos((k + 1) * std::numbers::pi / 5.0));
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(got[k], want[k], 1e-10);
  EXPECT_FALSE(e.defective);
}

TEST(EigGeneral, DiagonalImaginary) {
  const EigResult e = eig_general(Operator(mat2(cplx(0, 1), 0, 0, cplx(0, -1))));
  std::vector<double> im{e.values(0).imag(), e.values(1).imag()};
  std::sort(im.begin(), im.end());
  EXPECT_NEAR(im[0], -1.0, 1e-14);
  EXPECT_NEAR(im[1], 1.0, 1e-14);
}

TEST(EigGeneral, ResidualsOnRandomMatrices) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = gt::random_complex(12, 12, rng);
    const EigResult e = eig_general(Operator(h));
    for (Index k = 0; k < 12; ++k) {
      EXPECT_NEAR(e.vectors.col(k).norm(), 1.0, 1e-12);
      EXPECT_LE((h * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm(), 1e-8 * h.norm());
    }
  }
}

TEST(Svd, IdentityAndRankOne) {
  const SvdResult s = svd(Operator(Matrix::Identity(4, 4)));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(s.singular_values(k), 1.0, 1e-15);
  const SvdResult r = svd(Operator(mat2(0, 2, 0, 0)));
  EXPECT_NEAR(r.singular_values(0), 2.0, 1e-15);
  EXPECT_NEAR(r.singular_values(1), 0.0, 1e-15);
}

TEST(Svd, MatchesNormalOperatorEigenvalues) {
  std::mt19937_64 rng(23);
  const Matrix h = gt::random_complex(7, 7, rng);
  const RealVector sv = svd(Operator(h)).singular_values;
  // eigenvalues of H†H from the char-poly oracle, largest first
  std::vector<double> lam = gt::char_poly_roots(gt::adjoint_product_loop(h, h), 40000);
  ASSERT_EQ(lam.size(), 7u);
  std::sort(lam.rbegin(), lam.rend());
  for (int k = 0; k < 7; ++k) EXPECT_NEAR(sv(k), std::sqrt(lam[static_cast<std::size_t>(k)]), 1e-10);
}

TEST(Svd, InvariantsOnRandomAndHermitianInputs) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 9;
    const Matrix h = trial % 2 ? gt::random_complex(d, d, rng) : gt::random_hermitian(d, rng);
    const SvdResult s = svd(Operator(h));
    for (int k = 0; k + 1 < d; ++k) EXPECT_GE(s.singular_values(k), s.singular_values(k + 1));
    EXPECT_GE(s.singular_values(d - 1), 0.0);
    const Matrix rebuilt = s.left_vectors * s.singular_values.cast<cplx>().asDiagonal() * s.right_vectors.adjoint();
    EXPECT_LE((rebuilt - h).norm(), 1e-10 * h.norm());
    EXPECT_LE((s.left_vectors.adjoint() * s.left_vectors - Matrix::Identity(d, d)).norm(), 1e-10);
    EXPECT_LE((s.right_vectors.adjoint() * s.right_vectors - Matrix::Identity(d, d)).norm(), 1e-10);
    const RealVector lam = eigenvalues_hermitian(normal_operator(Operator(h)));
    for (int k = 0; k < d; ++k) {
      EXPECT_NEAR(s.singular_values(k), std::sqrt(std::max(0.0, lam(d - 1 - k))), 1e-10 * std::max(1.0, h.norm()));
    }
  }
}

TEST(SmallestSingularValue, ExamplesAndVariationalBound) {
  EXPECT_NEAR(smallest_singular_value(Operator(Matrix::Identity(5, 5))), 1.0, 1e-15);
  EXPECT_NEAR(smallest_singular_value(Operator(mat2(1, 1, 1, 1))), 0.0, 1e-15);

  std::mt19937_64 rng(31);
  const Matrix h = gt::random_complex(9, 9, rng);
  const double smin = smallest_singular_value(Operator(h));
  EXPECT_DOUBLE_EQ(smin, svd(Operator(h)).singular_values(8));
  for (int k = 0; k < 100; ++k) {
    const Vector x = gt::random_complex(9, 1, rng).col(0).normalized();
    EXPECT_GE((h * x).norm(), smin - 1e-12);
  }
}

TEST(PseudoSolve, DiagonalExamples) {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 1.0, 4.0;
  const PseudoSolveResult r = pseudo_solve(Operator(a), Vector::Ones(2), 1e-12);
  EXPECT_NEAR(std::abs(r.x(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r.x(1) - 0.25), 0.0, 1e-15);

  a.diagonal() << 1.0, 0.0;
  const PseudoSolveResult s = pseudo_solve(Operator(a), Vector::Ones(2), 1e-12);
  EXPECT_NEAR(std::abs(s.x(0) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(s.x(1), cplx(0.0));
  EXPECT_EQ(s.discarded_rank, 1);
}

TEST(PseudoSolve, ZeroMatrixIsDegenerate) {
  const PseudoSolveResult r = pseudo_solve(Operator(Matrix::Zero(3, 3)), Vector::Ones(3), 1e-12);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.x.norm(), 0.0);
}

TEST(PseudoSolve, RejectsBadRcondAndIndefinite) {
  const Operator i2(Matrix::Identity(2, 2));
  EXPECT_THROW(pseudo_solve(i2, Vector::Ones(2), 0.0), RangeError);
  EXPECT_THROW(pseudo_solve(i2, Vector::Ones(2), 1.0), RangeError);
  EXPECT_THROW(pseudo_solve(Operator(mat2(1, 0, 0, -1)), Vector::Ones(2), 1e-12), SymmetryError);
}

TEST(PseudoSolve, FullRankMatchesGaussianElimination) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = gt::random_hpd(6, rng);
    const Vector b = gt::random_complex(6, 1, rng).col(0);
    const Vector want = gt::gauss_solve(a, b);
    const Vector got = pseudo_solve(Operator(a), b, 1e-12).x;
    EXPECT_LE((got - want).norm(), 1e-9 * want.norm());
  }
}

TEST(PseudoSolve, SolutionIsOrthogonalToDiscardedSpace) {
  std::mt19937_64 rng(41);
  const Matrix q = gt::random_complex(6, 6, rng).householderQr().householderQ();
  RealVector lam(6);
  lam << 0.0, 0.0, 1.0, 2.0, 3.0, 4.0;
  const Matrix a = q * lam.cast<cplx>().asDiagonal() * q.adjoint();
  const Matrix herm = 0.5 * (a + a.adjoint());
  const PseudoSolveResult r = pseudo_solve(Operator(herm), Vector::Ones(6), 1e-12);
  EXPECT_EQ(r.discarded_rank, 2);
  EXPECT_LE(std::abs(q.col(0).dot(r.x)), 1e-12);
  EXPECT_LE(std::abs(q.col(1).dot(r.x)), 1e-12);
}
