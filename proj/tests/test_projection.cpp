#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "leanreg/error.hpp"
#include "leanreg/lab.hpp"
#include "leanreg/projection.hpp"
#include "leanreg/sandwich.hpp"
#include "oracles.hpp"

using namespace leanreg;

namespace {

Dataset noisy_sample(Eigen::Index n, Eigen::Index p, std::uint64_t seed, double noise = 1.0) {
  const Matrix z = oracle::gaussian_matrix(n, p + 1, seed);
  const Matrix cov = z.leftCols(p);
  Vector y = Vector::Constant(n, 0.5) + cov * Vector::LinSpaced(p, 1.0, 2.0) + noise * z.col(p);
  return Dataset::from_covariates(cov, y, true);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("dataset validation") {
  CHECK(kind_of([] { Dataset(Matrix::Ones(3, 1), Vector::Ones(4), true); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { Dataset(Matrix::Ones(2, 3), Vector::Ones(2), true); }) == ErrorKind::DimensionMismatch);
  Matrix x = Matrix::Ones(4, 2);
  x(1, 0) = 2.0;
  CHECK(kind_of([&] { Dataset(x, Vector::Ones(4), true); }) == ErrorKind::InvalidArgument);
  x(1, 0) = 1.0;
  x(2, 1) = std::nan("");
  CHECK(kind_of([&] { Dataset(x, Vector::Ones(4), true); }) == ErrorKind::NonFinite);
  const Dataset ok = Dataset::from_covariates(Matrix::Zero(4, 2), Vector::Ones(4), true);
  CHECK(ok.d() == 3);
  CHECK(ok.x().col(0).isOnes());
}

TEST_CASE("intercept-only fit is the sample mean") {
  Vector y(5);
  y << 1.0, 4.0, 2.0, 8.0, 5.0;
  const auto f = fit(Dataset(Matrix::Ones(5, 1), y, true));
  CHECK(f.beta_hat(0) == doctest::Approx(4.0).epsilon(1e-15));
  const auto cov = sandwich_cov(f);
  const double ss = (y.array() - 4.0).square().sum();
  CHECK(cov.std_err(0) == doctest::Approx(std::sqrt(ss) / 5.0).epsilon(1e-13));
}

TEST_CASE("noiseless data is interpolated") {
  const Matrix cov = oracle::gaussian_matrix(30, 3, 5);
  Vector beta(4);
  beta << 1.0, -2.0, 0.5, 3.0;
  const Dataset data = Dataset::from_covariates(cov, Vector::Zero(30), true);
  const Dataset exact(data.x(), data.x() * beta, true);
  const auto f = fit(exact);
  CHECK((f.beta_hat - beta).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f.residuals.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f.scores.cwiseAbs().maxCoeff() < 1e-11);
  CHECK(kind_of([&] { sandwich_cov(f); }) == ErrorKind::DegenerateVariance);

  OracleTruth truth;
  truth.beta = beta;
  truth.sigma = f.sigma_hat;
  CHECK(oracle_scores(exact, truth).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("fit agrees with an independent normal-equation solve") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset data = noisy_sample(50, 2, seed);
    const auto f = fit(data);
    const Matrix xtx = data.x().transpose() * data.x();
    const Vector xty = data.x().transpose() * data.y();
    const Vector want = oracle::gauss_solve(xtx, xty);
    CHECK((f.beta_hat - want).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((f.sigma_hat.matrix() * f.beta_hat - f.gamma_hat).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((f.scores.colwise().sum()).cwiseAbs().maxCoeff() < 1e-8 * 50);
    // stored scores are exactly sigma_hat^{-1} X_i r_i
    for (Eigen::Index i = 0; i < 50; ++i) {
      const Vector s = f.sigma_hat_inv.matrix() * data.x().row(i).transpose() * f.residuals(i);
      CHECK((s - f.scores.row(i).transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("singular Gram matrix") {
  Matrix cov = oracle::gaussian_matrix(20, 2, 3);
  cov.col(1) = 2.0 * cov.col(0);
  const Dataset data = Dataset::from_covariates(cov, Vector::LinSpaced(20, 0, 1), true);
  CHECK(kind_of([&] { fit(data); }) == ErrorKind::SingularGram);
}

TEST_CASE("affine equivariance") {
  const Dataset data = noisy_sample(80, 3, 11);
  const auto base = fit(data);
  const auto scaled_y = fit(Dataset(data.x(), 3.5 * data.y(), true));
  CHECK((scaled_y.beta_hat - 3.5 * base.beta_hat).cwiseAbs().maxCoeff() < 1e-10);
  Matrix x = data.x();
  x.col(2) *= 4.0;
  const auto scaled_x = fit(Dataset(x, data.y(), true));
  CHECK(scaled_x.beta_hat(2) == doctest::Approx(base.beta_hat(2) / 4.0).epsilon(1e-10));
  CHECK(scaled_x.beta_hat(1) == doctest::Approx(base.beta_hat(1)).epsilon(1e-10));
}

TEST_CASE("plug-in truth reproduces fitted scores") {
  const Dataset data = noisy_sample(60, 3, 17);
  const auto f = fit(data);
  OracleTruth truth;
  truth.beta = f.beta_hat;
  truth.sigma = f.sigma_hat;
  CHECK((oracle_scores(data, truth) - f.scores).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("oracle scores are centered on a homoskedastic DGP") {
  lab::DGPSpec spec;
  spec.n = 500;
  spec.d = 4;
  const lab::Simulator sim(spec);
  const Dataset data = sim.sample(99);
  const Matrix psi = oracle_scores(data, sim.truth());
  for (Eigen::Index j = 0; j < psi.cols(); ++j) {
    const double mean = psi.col(j).mean();
    const double sd = std::sqrt((psi.col(j).array() - mean).square().mean());
    CHECK(std::abs(mean) <= 4.0 * sd / std::sqrt(500.0));
  }
}

TEST_CASE("estimation error shrinks with n") {
  lab::DGPSpec spec;
  spec.d = 4;
  std::vector<double> medians;
  for (std::size_t n : {100, 200, 400}) {
    spec.n = n;
    const lab::Simulator sim(spec);
    std::vector<double> errs;
    for (std::uint64_t r = 0; r < 50; ++r) {
      errs.push_back((fit(sim.sample(r)).beta_hat - sim.truth().beta).norm());
    }
    medians.push_back(oracle::median(errs));
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("sandwich identity and independent meat") {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    const Dataset data = noisy_sample(120, 4, seed);
    const auto f = fit(data);
    const auto cov = sandwich_cov(f);
    CHECK(rel_frobenius(cov.cov.matrix(), score_outer_cov(f).matrix()) <= 1e-10);
    const Matrix meat = oracle::naive_meat(data.x(), f.residuals);
    CHECK(rel_frobenius(cov.v_hat.matrix(), meat) <= 1e-12);
    CHECK(rel_frobenius(cov.v_hat_n.matrix(), meat / 120.0) <= 1e-12);
    const Matrix bread = oracle::gauss_inverse(f.sigma_hat.matrix());
    CHECK(rel_frobenius(cov.cov.matrix(), bread * meat * bread / 120.0) <= 1e-9);
    CHECK(oracle::jacobi_eigenvalues(cov.cov.matrix()).minCoeff() >= -1e-10 * op_norm(cov.cov));
    for (Eigen::Index j = 0; j < 5; ++j) CHECK(cov.std_err(j) == doctest::Approx(std::sqrt(cov.cov(j, j))));
  }
}

TEST_CASE("sandwich scale equivariance") {
  const Dataset data = noisy_sample(100, 3, 41);
  const auto a = sandwich_cov(fit(data));
  const auto b = sandwich_cov(fit(Dataset(data.x(), -2.0 * data.y(), true)));
  CHECK((b.std_err - 2.0 * a.std_err).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("homoskedastic sandwich approaches sigma^2 Sigma_hat^{-1}") {
  lab::DGPSpec spec;
  spec.n = 2000;
  spec.d = 5;
  const lab::Simulator sim(spec);
  const auto f = fit(sim.sample(5));
  const auto cov = sandwich_cov(f);
  const Matrix target = f.sigma_hat_inv.matrix();
  CHECK(op_norm(SymMatrix(cov.cov.matrix() * 2000.0 - target)) / op_norm(SymMatrix(target)) <= 0.2);
}

TEST_CASE("homoskedastic relative error shrinks with n") {
  lab::DGPSpec spec;
  spec.d = 4;
  std::vector<double> medians;
  for (std::size_t n : {250, 1000, 4000}) {
    spec.n = n;
    const lab::Simulator sim(spec);
    const Matrix target = inverse(sim.truth().sigma).matrix();
    std::vector<double> errs;
    for (std::uint64_t r = 0; r < 30; ++r) {
      const auto cov = sandwich_cov(fit(sim.sample(1000 + r)));
      errs.push_back(op_norm(SymMatrix(cov.cov.matrix() * static_cast<double>(n) - target)) /
                     op_norm(SymMatrix(target)));
    }
    medians.push_back(oracle::median(errs));
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("oracle sandwich") {
  OracleTruth truth;
  truth.sigma = SymMatrix(oracle::random_psd(3, 2));
  truth.v = truth.sigma;
  CHECK(rel_frobenius(oracle_sandwich(truth).matrix(), oracle::gauss_inverse(truth.sigma.matrix())) < 1e-10);
  Vector v(3);
  v << 1.0, 2.0, 3.0;
  truth.sigma = SymMatrix::identity(3);
  truth.v = SymMatrix::diagonal(v);
  CHECK(rel_frobenius(oracle_sandwich(truth).matrix(), Matrix(v.asDiagonal())) < 1e-14);
}

TEST_CASE("assumption diagnostics") {
  SUBCASE("constant residual magnitude") {
    // y = +-c around an intercept-only fit with mean zero
    Vector y(6);
    y << 2.0, -2.0, 2.0, -2.0, 2.0, -2.0;
    const auto f = fit(Dataset(Matrix::Ones(6, 1), y, true));
    const auto diag = assumption_diagnostics(f, {1.0, 2.0, 3.5});
    CHECK(diag.residual_moments[0].value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(diag.residual_moments[1].value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(diag.residual_moments[2].value == doctest::Approx(std::pow(2.0, 3.5)).epsilon(1e-14));
  }
  SUBCASE("gaussian residuals") {
    lab::DGPSpec spec;
    spec.n = 20000;
    spec.d = 3;
    const lab::Simulator sim(spec);
    const auto f = fit(sim.sample(3));
    const auto diag = assumption_diagnostics(f, {4.0});
    // Var of X^4 for N(0,1) is 96, so the MC sd at n=20000 is about 0.07
    CHECK(std::abs(diag.residual_moments[0].value - 3.0) < 0.3);
    CHECK(std::abs(diag.eig_min - 1.0) < 0.1);
    CHECK(std::abs(diag.eig_max - 1.0) < 0.1);
    CHECK(diag.kappa_hat >= 1.0);
    CHECK(diag.kappa_hat < 1.1);
  }
}
