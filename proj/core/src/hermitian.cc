// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/hermitian.h"

#include <cmath>

#include "sepkit/error.h"

namespace sepkit {

double DiagonalLoading(const Eigen::MatrixXcd& a) {
  return 1e-6 * a.trace().real() / double(a.rows()) + 1e-8;
}

Eigen::MatrixXcd LoadedSolve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double load = DiagonalLoading(a);
  if (!std::isfinite(load)) throw Error(Errc::kNumerical, "non-finite covariance trace");
  Eigen::MatrixXcd loaded = a;
  loaded.diagonal().array() += load;
  Eigen::LLT<Eigen::MatrixXcd> llt(loaded);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::kNumerical, "covariance is not positive definite after loading");
  Eigen::MatrixXcd x = llt.solve(b);
  if (!x.allFinite()) throw Error(Errc::kNumerical, "non-finite solution");
  return x;
}

Eigen::MatrixXcd Hermitize(const Eigen::MatrixXcd& a) {
  return (a + a.adjoint()) * 0.5;
}

Eigen::VectorXcd PrincipalEigenvector(const Eigen::MatrixXcd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(Errc::kNumerical, "principal eigenvector of a zero or non-finite matrix");

  Eigen::MatrixXcd power = a / scale;
  for (int i = 0; i < 6; ++i) {
    power = power * power;
    power /= power.cwiseAbs().maxCoeff();
  }

  Eigen::Index start = 0;
  power.colwise().norm().maxCoeff(&start);
  Eigen::VectorXcd v = power.col(start).normalized();
  double rayleigh = (v.adjoint() * a * v)(0).real();
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXcd next = power * v;
    const double norm = next.norm();
    if (!(norm > 0.0)) break;
    v = next / norm;
    const double updated = (v.adjoint() * a * v)(0).real();
    const bool converged = std::abs(updated - rayleigh) < 1e-12 * std::abs(updated);
    rayleigh = updated;
    if (converged) break;
  }

  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

}  // namespace sepkit
