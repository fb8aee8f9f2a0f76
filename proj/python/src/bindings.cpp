#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "leanreg/cli.hpp"
#include "leanreg/confidence.hpp"
#include "leanreg/error.hpp"
#include "leanreg/gaussian_max.hpp"
#include "leanreg/lab.hpp"
#include "leanreg/partial_corr.hpp"
#include "leanreg/projection.hpp"
#include "leanreg/sandwich.hpp"

namespace py = pybind11;
using namespace leanreg;

namespace {

py::dict fit_dict(const ProjectionFit& f, const SandwichCov& cov) {
  py::dict out;
  out["beta_hat"] = f.beta_hat;
  out["residuals"] = f.residuals;
  out["scores"] = f.scores;
  out["sigma_hat"] = f.sigma_hat.matrix();
  out["v_hat"] = cov.v_hat.matrix();
  out["cov"] = cov.cov.matrix();
  out["std_err"] = cov.std_err;
  return out;
}

Dataset dataset(const Matrix& x, const Vector& y, bool intercept) { return Dataset::from_covariates(x, y, intercept); }

lab::DGPSpec dgp(std::size_t n, std::size_t d, const std::string& family, double rho, bool intercept, double c,
                 const std::string& error, double sigma, double nu, const std::string& target) {
  lab::DGPSpec spec;
  spec.n = n;
  spec.d = d;
  spec.family = lab::parse_family(family);
  spec.rho = rho;
  spec.intercept = intercept;
  spec.c = c;
  if (error == "gaussian") {
    spec.error = lab::ErrorLaw::gaussian(sigma);
  } else if (error == "student_t") {
    spec.error = lab::ErrorLaw::student_t(nu, sigma);
  } else {
    throw Error(ErrorKind::InvalidSpec, "unknown error law '" + error + "'");
  }
  spec.target = lab::parse_target(target);
  lab::validate(spec);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Assumption-lean regression inference";

  // Subclass of ValueError with a `kind` attribute naming the ErrorKind.
  static PyObject* const error_type = PyErr_NewException("leanreg.LeanregError", PyExc_ValueError, nullptr);
  m.attr("LeanregError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string kind(to_string(e.kind()));
      py::object err = py::handle(error_type)(kind + ": " + e.what());
      err.attr("kind") = kind;
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  m.def(
      "fit",
      [](const Matrix& x, const Vector& y, bool intercept) {
        const ProjectionFit f = fit(dataset(x, y, intercept));
        return fit_dict(f, sandwich_cov(f));
      },
      py::arg("x"), py::arg("y"), py::arg("intercept") = true,
      "OLS projection fit with sandwich covariance. With intercept=True a ones column is prepended.");

  m.def(
      "confidence_intervals",
      [](const Matrix& x, const Vector& y, const std::string& method, double alpha, std::size_t b,
         std::uint64_t seed, bool intercept) {
        const ProjectionFit f = fit(dataset(x, y, intercept));
        const SandwichCov cov = sandwich_cov(f);
        const SimultaneousCI band = ci(f, cov, parse_method(method), alpha, b, seed);
        py::dict out = fit_dict(f, cov);
        out["method"] = std::string(to_string(band.method));
        out["level"] = band.level;
        out["crit"] = band.crit;
        out["lower"] = band.lower;
        out["upper"] = band.upper;
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("method") = "bootstrap", py::arg("alpha") = 0.05,
      py::arg("b") = kDefaultBootstrapDraws, py::arg("seed") = 0, py::arg("intercept") = true,
      "Simultaneous confidence rectangle for the projection parameter.");

  m.def("bonferroni_crit", &bonferroni_crit, py::arg("d"), py::arg("alpha"));
  m.def("sidak_crit", &sidak_crit, py::arg("d"), py::arg("alpha"));
  m.def(
      "max_gauss_quantile",
      [](const Matrix& corr, double alpha, std::size_t draws, std::uint64_t seed) {
        return mc_quantile(MaxGaussSpec{SymMatrix(corr), draws, seed}, alpha);
      },
      py::arg("corr"), py::arg("alpha"), py::arg("draws") = 100000, py::arg("seed") = 0,
      "Monte Carlo (1 - alpha) quantile of max_j |G_j| for G ~ N(0, corr).");

  m.def(
      "partial_correlations",
      [](const Matrix& x, const std::string& method, double alpha, std::size_t b, std::uint64_t seed) {
        const PartialCorrFit f = pcor_fit(x);
        const PartialCorrCI band = pcor_ci(f, parse_method(method), alpha, b, seed);
        py::list intervals;
        for (const auto& iv : band.intervals) {
          py::dict row;
          row["j"] = iv.j;
          row["k"] = iv.k;
          row["estimate"] = iv.estimate;
          row["zeta"] = iv.zeta;
          row["lower"] = iv.lower;
          row["upper"] = iv.upper;
          intervals.append(row);
        }
        py::dict out;
        out["theta_hat"] = f.theta_hat;
        out["crit"] = band.crit;
        out["level"] = band.level;
        out["intervals"] = intervals;
        out["edges"] = band.edges();
        return out;
      },
      py::arg("x"), py::arg("method") = "bootstrap", py::arg("alpha") = 0.05, py::arg("b") = kDefaultBootstrapDraws,
      py::arg("seed") = 0, "Partial correlations with simultaneous intervals over all pairs.");

  m.def(
      "verify_bounds",
      [](std::size_t reps, std::size_t n, std::size_t d, const std::string& family, double rho, double c,
         const std::string& error, double nu, std::uint64_t seed, std::optional<double> eta) {
        lab::DGPSpec spec = dgp(n, d, family, rho, true, c, error, 1.0, nu, "projection");
        spec.seed = seed;
        const auto rep = lab::verify_deterministic_bounds(reps, spec, eta);
        py::dict out;
        out["reps"] = rep.reps;
        out["valid"] = rep.valid;
        out["skipped"] = rep.skipped_large_deviation + rep.skipped_singular;
        out["theorem_violations"] = rep.theorem_violations;
        out["corollary_violations"] = rep.corollary_violations;
        out["max_theorem_ratio"] = rep.max_theorem_ratio;
        out["max_corollary_ratio"] = rep.max_corollary_ratio;
        out["event_count"] = rep.event_count;
        return out;
      },
      py::arg("reps"), py::arg("n"), py::arg("d"), py::arg("family") = "misspecified_quadratic",
      py::arg("rho") = 0.0, py::arg("c") = 1.0, py::arg("error") = "gaussian", py::arg("nu") = 6.0,
      py::arg("seed") = 0, py::arg("eta") = py::none(),
      "Checks the deterministic linearization bounds on simulated replicates.");

  m.def(
      "coverage",
      [](std::size_t reps, std::size_t n, std::size_t d, const std::string& family, double rho, double alpha,
         std::size_t b, std::uint64_t seed, const std::string& target) {
        const bool pcor = lab::parse_target(target) == lab::Target::PartialCorrelation;
        const auto spec = dgp(n, d, family, rho, !pcor, 1.0, "gaussian", 1.0, 0.0, target);
        const auto table = lab::coverage_experiment(spec, {Method::Bonferroni, Method::Sidak, Method::Bootstrap},
                                                    alpha, reps, b, seed);
        py::dict out;
        for (const auto& row : table.rows) {
          py::dict r;
          r["coverage"] = row.coverage;
          r["valid"] = row.valid;
          r["mean_width"] = row.mean_width;
          r["median_width"] = row.median_width;
          out[py::str(std::string(to_string(row.method)))] = r;
        }
        return out;
      },
      py::arg("reps"), py::arg("n"), py::arg("d"), py::arg("family") = "linear_homoskedastic", py::arg("rho") = 0.0,
      py::arg("alpha") = 0.1, py::arg("b") = 1000, py::arg("seed") = 0, py::arg("target") = "projection",
      "Empirical simultaneous coverage per calibration method.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::main_entry(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = std::string(cli::kToolVersion);
}
