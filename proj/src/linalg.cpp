#include "ccpnet/linalg.hpp"

#include <stdexcept>

namespace ccpnet {

Eigh eigh(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed to converge");
  return Eigh{solver.eigenvalues(), solver.eigenvectors()};
}

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const Eigh e = eigh(m.adjoint() * m);
  const double top = e.values(e.values.size() - 1);
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double trace_norm_hermitian(const Mat& h) {
  const Eigh e = eigh(h);
  return e.values.cwiseAbs().sum();
}

Mat sign_of_hermitian(const Mat& h) {
  const Eigh e = eigh(h);
  RVec flipped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) flipped(i) = e.values(i) < 0.0 ? -1.0 : 1.0;
  return e.vectors * flipped.asDiagonal() * e.vectors.adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace ccpnet
