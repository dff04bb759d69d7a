// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_HERMITIAN_H_
#define SEPKIT_HERMITIAN_H_

#include <Eigen/Dense>

namespace sepkit {

// Diagonal loading used for every Hermitian solve: 1e-6 * trace / n + 1e-8.
double DiagonalLoading(const Eigen::MatrixXcd& a);

// Solves (A + loading * I) X = B by Cholesky. Throws kNumerical when the
// loaded matrix is not positive definite or the solution is not finite.
Eigen::MatrixXcd LoadedSolve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// (A + A^H) / 2
Eigen::MatrixXcd Hermitize(const Eigen::MatrixXcd& a);

// Unit-norm principal eigenvector of a Hermitian PSD matrix by power
// iteration. The iteration runs on A^64 (six normalized squarings) so that
// close eigenvalue pairs still separate within the 200-step budget; it stops
// early once the Rayleigh quotient changes by less than 1e-12 relative.
// The first component with magnitude above 1e-12 is rotated to be real and
// positive. Throws kNumerical for a zero or non-finite matrix.
Eigen::VectorXcd PrincipalEigenvector(const Eigen::MatrixXcd& a);

}  // namespace sepkit

#endif  // SEPKIT_HERMITIAN_H_
