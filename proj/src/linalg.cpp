#include "leanreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leanreg/error.hpp"

namespace leanreg {

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square with dim >= 1");
  }
  m_ = (a + a.transpose()) * 0.5;
}

SymMatrix SymMatrix::identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Vector& diag) { return SymMatrix(Matrix(diag.asDiagonal())); }

SpectralDecomp spectral(const SymMatrix& a) {
  if (!a.matrix().allFinite()) {
    throw Error(ErrorKind::NonFinite, "matrix has NaN or Inf entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Internal, "eigendecomposition did not converge");
  }
  // Eigen returns ascending order.
  SpectralDecomp out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double op_norm(const SymMatrix& a) {
  const auto sd = spectral(a);
  return std::max(std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(sd.eigenvalues.size() - 1)));
}

namespace {

void require_pd(const SpectralDecomp& sd, double rel_tol, const char* what) {
  const double lmax = sd.eigenvalues(0);
  const double lmin = sd.eigenvalues(sd.eigenvalues.size() - 1);
  if (!(lmax > 0.0) || lmin <= rel_tol * lmax) {
    throw Error(ErrorKind::SingularMatrix,
                std::string(what) + ": smallest eigenvalue " + std::to_string(lmin) +
                    " is not above the relative threshold of the largest " + std::to_string(lmax));
  }
}

}  // namespace

SymMatrix inv_sqrt(const SymMatrix& a, double rel_tol) {
  const auto sd = spectral(a);
  require_pd(sd, rel_tol, "inverse square root");
  return sd.apply([](double l) { return 1.0 / std::sqrt(l); });
}

SymMatrix inverse(const SymMatrix& a, double rel_tol) {
  const auto sd = spectral(a);
  require_pd(sd, rel_tol, "inverse");
  return sd.apply([](double l) { return 1.0 / l; });
}

SymMatrix psd_sqrt(const SymMatrix& a) {
  const auto sd = spectral(a);
  const double lmax = std::max(sd.eigenvalues(0), 0.0);
  const double lmin = sd.eigenvalues(sd.eigenvalues.size() - 1);
  if (lmin < -kDefaultRelTol * std::max(lmax, 1.0)) {
    throw Error(ErrorKind::SingularMatrix, "matrix is not positive semidefinite");
  }
  return sd.apply([](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

double condition_number(const SymMatrix& a, double rel_tol) {
  const auto sd = spectral(a);
  require_pd(sd, rel_tol, "condition number");
  return sd.eigenvalues(0) / sd.eigenvalues(sd.eigenvalues.size() - 1);
}

SymMatrix corr_of(const SymMatrix& a) {
  const Vector diag = a.diag();
  for (Eigen::Index j = 0; j < diag.size(); ++j) {
    if (!(diag(j) > 0.0)) {
      throw Error(ErrorKind::NonPositiveDiagonal,
                  "diagonal entry " + std::to_string(j) + " is not positive");
    }
  }
  const Vector s = diag.cwiseSqrt().cwiseInverse();
  Matrix c = s.asDiagonal() * a.matrix() * s.asDiagonal();
  c.diagonal().setOnes();
  return SymMatrix(c);
}

double whitened_condition(const SymMatrix& a, const SymMatrix& b) {
  const SymMatrix w = inv_sqrt(a);
  const SymMatrix inner(w.matrix() * b.matrix() * w.matrix());
  return std::sqrt(condition_number(inner));
}

double weighted_norm(const Vector& x, const SymMatrix& weight) {
  return std::sqrt(std::max(0.0, x.dot(weight.matrix() * x)));
}

}  // namespace leanreg
