#include <doctest.h>

#include <cmath>
#include <functional>

#include "leanreg/error.hpp"
#include "leanreg/gaussian_max.hpp"
#include "leanreg/lab.hpp"
#include "leanreg/normal.hpp"
#include "leanreg/partial_corr.hpp"
#include "oracles.hpp"

using namespace leanreg;

namespace {

lab::Simulator pcor_sim(std::size_t n, std::size_t d, double rho) {
  lab::DGPSpec spec;
  spec.n = n;
  spec.d = d;
  spec.rho = rho;
  spec.intercept = false;
  spec.target = lab::Target::PartialCorrelation;
  return lab::Simulator(spec);
}

// psi_hat_jk straight from the definition, loops only
Matrix naive_psi_hat(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Vector mean = x.colwise().mean().transpose();
  Matrix s = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector c = x.row(i).transpose() - mean;
    s += c * c.transpose();
  }
  s /= static_cast<double>(n);
  const Matrix omega = oracle::gauss_inverse(s);
  Matrix a(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double acc = 0.0;
      for (Eigen::Index l = 0; l < d; ++l) acc += (x(i, l) - mean(l)) * omega(l, j);
      a(i, j) = acc / std::sqrt(omega(j, j));
    }
  Matrix psi(n, d * (d - 1) / 2);
  Eigen::Index p = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k, ++p) {
      const double theta = -omega(j, k) / std::sqrt(omega(j, j) * omega(k, k));
      double m_cross = 0.0;
      double m_sq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        m_cross += a(i, j) * a(i, k) / static_cast<double>(n);
        m_sq += (a(i, j) * a(i, j) + a(i, k) * a(i, k)) / static_cast<double>(n);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        psi(i, p) = -(a(i, j) * a(i, k) - m_cross) -
                    0.5 * theta * (a(i, j) * a(i, j) + a(i, k) * a(i, k) - m_sq);
      }
    }
  return psi;
}

double ks_half_normal(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double best = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double cdf = 2.0 * normal_cdf(draws[i]) - 1.0;
    best = std::max({best, std::abs(static_cast<double>(i + 1) / n - cdf), std::abs(static_cast<double>(i) / n - cdf)});
  }
  return best;
}

// Sample whose centered covariance is exactly `sigma` and mean exactly `mu`.
Matrix engineered_sample(Eigen::Index n, const Matrix& sigma, const Vector& mu, std::uint64_t seed) {
  const Matrix z = oracle::gaussian_matrix(n, sigma.rows(), seed);
  const Matrix zc = z.rowwise() - z.colwise().mean();
  const SymMatrix s(zc.transpose() * zc / static_cast<double>(n));
  const Matrix white = zc * inv_sqrt(s).matrix();
  return (white * psd_sqrt(SymMatrix(sigma)).matrix()).rowwise() + mu.transpose();
}

}  // namespace

TEST_CASE("pair index is lexicographic") {
  const auto pairs = pair_index(4);
  REQUIRE(pairs.size() == 6);
  CHECK(pairs[0] == std::make_pair(Eigen::Index{0}, Eigen::Index{1}));
  CHECK(pairs[2] == std::make_pair(Eigen::Index{0}, Eigen::Index{3}));
  CHECK(pairs[3] == std::make_pair(Eigen::Index{1}, Eigen::Index{2}));
  CHECK(pairs[5] == std::make_pair(Eigen::Index{2}, Eigen::Index{3}));
}

TEST_CASE("bivariate partial correlation is the sample correlation") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix x = pcor_sim(300, 2, 0.5).sample_covariates(seed);
    const auto f = pcor_fit(x);
    CHECK(f.theta_hat(0, 1) == doctest::Approx(oracle::sample_corr(x.col(0), x.col(1))).epsilon(1e-10));
    CHECK(f.theta_hat(0, 0) == 1.0);
    CHECK(f.theta_hat(1, 1) == 1.0);
  }
}

TEST_CASE("fit invariants and independent psi") {
  const Matrix x = pcor_sim(200, 4, 0.3).sample_covariates(8);
  const auto f = pcor_fit(x);
  CHECK((f.theta_hat - f.theta_hat.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.theta_hat.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
  CHECK((f.psi_hat.colwise().sum()).cwiseAbs().maxCoeff() <= 1e-8 * 200);
  const Matrix want = naive_psi_hat(x);
  CHECK((f.psi_hat - want).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index p = 0; p < 6; ++p) {
    CHECK(f.zeta_hat(p) * f.zeta_hat(p) == doctest::Approx(f.psi_hat.col(p).squaredNorm() / 200.0).epsilon(1e-14));
  }
}

TEST_CASE("independent columns give small partial correlations") {
  const Matrix x = oracle::gaussian_matrix(5000, 5, 31);
  const auto f = pcor_fit(x);
  Matrix off = f.theta_hat;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() <= 0.08);
}

TEST_CASE("tridiagonal precision: conditional independence") {
  Matrix omega(3, 3);
  omega << 1.0, -0.4, 0.0, -0.4, 1.0, -0.4, 0.0, -0.4, 1.0;
  const Matrix sigma = oracle::gauss_inverse(omega);
  const Matrix x = oracle::gaussian_matrix(5000, 3, 32) * psd_sqrt(SymMatrix(sigma)).matrix();
  const auto f = pcor_fit(x);
  CHECK(std::abs(f.theta_hat(0, 2)) <= 0.08);
  CHECK(f.theta_hat(0, 1) == doctest::Approx(0.4).epsilon(0.2));
}

TEST_CASE("scale invariance and sign flips") {
  const Matrix x = pcor_sim(300, 4, 0.4).sample_covariates(33);
  const auto base = pcor_fit(x);
  Matrix y = x;
  y.col(0) = 3.0 * y.col(0).array() + 7.0;
  y.col(2) = 0.2 * y.col(2).array() - 1.0;
  CHECK((pcor_fit(y).theta_hat - base.theta_hat).cwiseAbs().maxCoeff() < 1e-9);
  Matrix z = x;
  z.col(1) = -z.col(1);
  const auto flipped = pcor_fit(z);
  for (Eigen::Index j = 0; j < 4; ++j)
    for (Eigen::Index k = 0; k < 4; ++k) {
      if (j == k) continue;
      const double sign = (j == 1 || k == 1) ? -1.0 : 1.0;
      CHECK(flipped.theta_hat(j, k) == doctest::Approx(sign * base.theta_hat(j, k)).epsilon(1e-12));
    }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(pcor_fit(Matrix::Zero(10, 1)), Error);
  CHECK_THROWS_AS(pcor_fit(Matrix::Zero(3, 3)), Error);
  Matrix x = oracle::gaussian_matrix(30, 3, 2);
  x.col(2) = x.col(0) + x.col(1);
  try {
    pcor_fit(x);
    FAIL("expected SingularCovariance");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularCovariance);
  }
  x(0, 0) = std::nan("");
  CHECK_THROWS_AS(pcor_fit(x), Error);
}

TEST_CASE("oracle scores: identity covariance reduction") {
  // with Sigma = I, mu = 0, theta = 0: psi_12(x) = -x_1 x_2
  OracleTruth truth;
  truth.sigma = SymMatrix::identity(2);
  truth.mu_x = Vector::Zero(2);
  truth.theta = Matrix::Identity(2, 2);
  const Matrix x = oracle::gaussian_matrix(20, 2, 3);
  const Matrix psi = oracle_pcor_scores(x, truth);
  for (Eigen::Index i = 0; i < 20; ++i) CHECK(psi(i, 0) == doctest::Approx(-x(i, 0) * x(i, 1)).epsilon(1e-14));
}

TEST_CASE("oracle scores are centered") {
  const auto sim = pcor_sim(100000, 4, 0.5);
  const Matrix psi = oracle_pcor_scores(sim.sample_covariates(4), sim.truth());
  for (Eigen::Index p = 0; p < psi.cols(); ++p) {
    const double mean = psi.col(p).mean();
    const double sd = std::sqrt((psi.col(p).array() - mean).square().mean());
    CHECK(std::abs(mean) <= 4.0 * sd / std::sqrt(100000.0));
  }
}

TEST_CASE("plug-in truth reproduces psi_hat") {
  const Matrix x = pcor_sim(150, 3, 0.2).sample_covariates(5);
  const auto f = pcor_fit(x);
  OracleTruth truth;
  truth.sigma = f.sigma_hat;
  truth.mu_x = f.x_bar;
  truth.theta = f.theta_hat;
  CHECK((oracle_pcor_scores(x, truth) - f.psi_hat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pcor bootstrap") {
  SUBCASE("single pair is half-normal") {
    const auto f = pcor_fit(pcor_sim(500, 2, 0.3).sample_covariates(6));
    CHECK(ks_half_normal(pcor_bootstrap(f, 5000, 1).draws) <= 0.03);
  }
  SUBCASE("scaling psi leaves draws unchanged") {
    auto f = pcor_fit(pcor_sim(100, 3, 0.3).sample_covariates(7));
    const auto a = pcor_bootstrap(f, 200, 2);
    f.psi_hat *= 4.0;
    f.zeta_hat *= 4.0;
    CHECK(pcor_bootstrap(f, 200, 2).draws == a.draws);
  }
  SUBCASE("near independence tracks Sidak over six pairs") {
    const auto f = pcor_fit(pcor_sim(2000, 4, 0.0).sample_covariates(8));
    const auto boot = pcor_bootstrap(f, 5000, 3);
    for (double a : {0.05, 0.1}) CHECK(std::abs(boot.quantile(a) - sidak_crit(6, a)) < 0.06);
  }
}

TEST_CASE("pcor intervals") {
  const auto f2 = pcor_fit(pcor_sim(200, 2, 0.5).sample_covariates(9));
  const auto b2 = pcor_ci(f2, Method::Bonferroni, 0.05, 1, 0);
  CHECK(std::abs(b2.crit - 1.959964) < 1e-5);

  const auto f = pcor_fit(pcor_sim(400, 5, 0.3).sample_covariates(10));
  const auto s = pcor_ci(f, Method::Sidak, 0.05, 1, 0);
  const auto b = pcor_ci(f, Method::Bonferroni, 0.05, 1, 0);
  REQUIRE(s.intervals.size() == 10);
  CHECK(s.crit == sidak_crit(10, 0.05));
  CHECK(b.crit == bonferroni_crit(10, 0.05));
  for (std::size_t p = 0; p < 10; ++p) {
    const auto& iv = s.intervals[p];
    CHECK(iv.upper - iv.lower <= b.intervals[p].upper - b.intervals[p].lower);
    CHECK(iv.lower == iv.estimate - s.crit * iv.zeta / std::sqrt(400.0));
    CHECK(iv.estimate == f.theta_hat(iv.j, iv.k));
  }
  std::size_t off_zero = 0;
  for (const auto& iv : s.intervals) off_zero += (iv.lower > 0.0 || iv.upper < 0.0) ? 1 : 0;
  CHECK(s.edges().size() == off_zero);
  // equicorrelated rho = 0.3, p = 5: every partial correlation is 0.3 / 1.9
  const auto big = pcor_ci(pcor_fit(pcor_sim(6000, 5, 0.3).sample_covariates(10)), Method::Sidak, 0.05, 1, 0);
  CHECK(big.edges().size() == 10);
  CHECK_THROWS_AS(pcor_ci(f, Method::Sidak, 1.0, 1, 0), Error);
}

TEST_CASE("linearization: engineered exact moments") {
  const auto sim = pcor_sim(500, 4, 0.4);
  const Matrix x = engineered_sample(500, sim.truth().sigma.matrix(), sim.truth().mu_x, 11);
  const auto lin = verify_pcor_linearization(x, sim.truth());
  CHECK(lin.lhs <= 1e-8);
  CHECK(lin.d_n_sigma <= 1e-10);
}

TEST_CASE("linearization ratio stays bounded") {
  const auto sim = pcor_sim(2000, 5, 0.3);
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    worst = std::max(worst, verify_pcor_linearization(sim.sample_covariates(r), sim.truth()).ratio);
  }
  CHECK(worst <= 50.0);
}

TEST_CASE("linearization error shrinks with n") {
  std::vector<double> medians;
  for (std::size_t n : {500, 1000, 2000}) {
    const auto sim = pcor_sim(n, 4, 0.3);
    std::vector<double> lhs;
    for (std::uint64_t r = 0; r < 100; ++r) lhs.push_back(verify_pcor_linearization(sim.sample_covariates(r), sim.truth()).lhs);
    medians.push_back(oracle::median(lhs));
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("linearization precondition") {
  const auto sim = pcor_sim(6, 4, 0.0);
  bool seen = false;
  for (std::uint64_t r = 0; r < 50 && !seen; ++r) {
    try {
      verify_pcor_linearization(sim.sample_covariates(r), sim.truth());
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PreconditionViolated);
      seen = true;
    }
  }
  CHECK(seen);
}
