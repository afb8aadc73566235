#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fdswipt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

// Absolute tolerance under which a matrix is accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-10;

bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

/// Orthonormal basis of the right null space of h, computed via SVD.
/// Columns n of the result satisfy h * n = 0; the column count is
/// cols(h) - rank(h) with rank threshold 1e-10 * sigma_max * max(rows, cols).
/// Throws std::invalid_argument("empty matrix") for size-zero input and
/// std::invalid_argument("ZF null space empty") when h has full column rank.
Matrix null_space_basis(const Matrix& h);

struct EigResult {
  RealVector values;   // ascending
  Matrix vectors;      // unitary, column i pairs with values[i]
};

/// Eigendecomposition of a Hermitian matrix. Input is checked against
/// kHermitianTol and symmetrized before factoring.
EigResult hermitian_eig(const Matrix& a);

/// Factor V of a PSD matrix S with V * V^H = S, via eigenvalue square root.
/// V has rank(S) columns. Eigenvalues in [-1e-8*||S||_F, 0) are clipped to
/// zero; anything below that throws std::invalid_argument("not PSD").
Matrix psd_factor(const Matrix& s);

struct Rank1Result {
  double lambda1 = 0.0;    // largest eigenvalue, clipped to >= 0
  Vector v1;               // unit eigenvector for lambda1
  double rank1_ratio = 1.0;  // lambda1 / trace, 1 when trace == 0
};

/// Dominant eigenpair of a PSD matrix plus the trace fraction it carries.
Rank1Result dominant_rank1(const Matrix& x);

}  // namespace linalg
}  // namespace fdswipt
