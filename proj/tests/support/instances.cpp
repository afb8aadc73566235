#include "support/instances.hpp"

namespace fdswipt::testsupport {

Matrix random_matrix(int rows, int cols, GaussianSource& rng) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.complex_normal(1.0);
  }
  return m;
}

Matrix random_hermitian(int dim, GaussianSource& rng) {
  const Matrix g = random_matrix(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_psd(int dim, GaussianSource& rng) {
  const Matrix g = random_matrix(dim, dim, rng);
  return g * g.adjoint();
}

SystemParams desk_params(int mt, int mr, double p_max) {
  SystemParams p;
  p.mt = mt;
  p.mr = mr;
  p.p_max = p_max;
  return p;
}

SystemParams loose_params(int mt, int mr) {
  SystemParams p;
  p.mt = mt;
  p.mr = mr;
  p.p_max = 10.0;
  p.gamma_a = 1e-3;
  p.gamma_b = 1e-3;
  p.gamma_e = 1e6;
  p.u_bar = 0.0;
  return p;
}

}  // namespace fdswipt::testsupport
