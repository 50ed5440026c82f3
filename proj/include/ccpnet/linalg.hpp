#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ccpnet {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Hermitian eigendecomposition: ascending eigenvalues, orthonormal columns.
// This is the single dense-linear-algebra primitive the rest of the library
// builds on.
struct Eigh {
  RVec values;
  Mat vectors;
};
Eigh eigh(const Mat& hermitian);

Mat hermitize(const Mat& m);
double max_abs(const Mat& m);

// Largest singular value (via eigh of m^dagger m).
double spectral_norm(const Mat& m);

// Sum of |eigenvalue| of a hermitian matrix.
double trace_norm_hermitian(const Mat& h);

// Spectral flip: same eigenvectors, eigenvalues mapped to sign(lambda),
// with sign(0) = +1. Always a self-adjoint contraction with norm 1.
Mat sign_of_hermitian(const Mat& h);

Mat kron(const Mat& a, const Mat& b);

}  // namespace ccpnet
