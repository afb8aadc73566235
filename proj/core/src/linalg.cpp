#include "fdswipt/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace fdswipt::linalg {

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix null_space_basis(const Matrix& h) {
  if (h.rows() == 0 || h.cols() == 0) {
    throw std::invalid_argument("empty matrix");
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double thresh =
      1e-10 * sigma_max * static_cast<double>(std::max(h.rows(), h.cols()));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > thresh) ++rank;
  }
  const Eigen::Index d = h.cols() - rank;
  if (d == 0) {
    throw std::invalid_argument("ZF null space empty");
  }
  return svd.matrixV().rightCols(d);
}

EigResult hermitian_eig(const Matrix& a) {
  if (!is_hermitian(a)) {
    throw std::invalid_argument("not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix psd_factor(const Matrix& s) {
  auto eig = hermitian_eig(s);
  const double norm = s.norm();
  const double clip_floor = -1e-8 * norm;
  if (eig.values.size() > 0 && eig.values.minCoeff() < clip_floor) {
    throw std::invalid_argument("not PSD");
  }
  const double lam_max = eig.values.size() > 0 ? eig.values.maxCoeff() : 0.0;
  const double rank_thresh = 1e-12 * std::max(lam_max, 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > rank_thresh) ++rank;
  }
  Matrix v(s.rows(), rank);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > rank_thresh) {
      v.col(col++) = eig.vectors.col(i) * std::sqrt(eig.values(i));
    }
  }
  return v;
}

Rank1Result dominant_rank1(const Matrix& x) {
  auto eig = hermitian_eig(x);
  const Eigen::Index n = eig.values.size();
  if (n == 0) {
    throw std::invalid_argument("empty matrix");
  }
  const double lam_max = eig.values(n - 1);
  if (eig.values(0) < -1e-8 * (1.0 + std::max(lam_max, 0.0))) {
    throw std::invalid_argument("not PSD");
  }
  Rank1Result r;
  r.lambda1 = std::max(lam_max, 0.0);
  r.v1 = eig.vectors.col(n - 1);
  const double tr = x.trace().real();
  r.rank1_ratio = tr > 0.0 ? r.lambda1 / tr : 1.0;
  return r;
}

}  // namespace fdswipt::linalg
