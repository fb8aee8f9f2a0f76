#include <doctest.h>

#include <omp.h>

#include "leanreg/confidence.hpp"
#include "leanreg/gaussian_max.hpp"
#include "leanreg/lab.hpp"
#include "leanreg/partial_corr.hpp"
#include "leanreg/rng.hpp"
#include "leanreg/sandwich.hpp"

using namespace leanreg;

namespace {

template <typename F>
auto with_threads(int threads, F&& f) {
  const int before = omp_get_max_threads();
  omp_set_num_threads(threads);
  auto out = f();
  omp_set_num_threads(before);
  return out;
}

}  // namespace

TEST_CASE("substreams are distinct and stable") {
  CHECK(rng::substream(1, 0) != rng::substream(1, 1));
  CHECK(rng::substream(1, 0) != rng::substream(2, 0));
  CHECK(rng::substream(1, rng::Tag::Data) != rng::substream(1, rng::Tag::Bootstrap));
  rng::Stream a(42);
  rng::Stream b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("results do not depend on the thread count") {
  lab::DGPSpec spec;
  spec.n = 300;
  spec.d = 5;
  spec.family = lab::Family::MisspecifiedQuadratic;
  spec.rho = 0.3;
  spec.seed = 11;

  const auto truth1 = with_threads(1, [&] { return lab::Simulator(spec).truth().v.matrix(); });
  const auto truth4 = with_threads(4, [&] { return lab::Simulator(spec).truth().v.matrix(); });
  CHECK(truth1 == truth4);

  const lab::Simulator sim(spec);
  const Dataset data = sim.sample(1);
  const auto f = fit(data);
  const auto cov = sandwich_cov(f);
  const auto boot1 = with_threads(1, [&] { return multiplier_bootstrap(f, cov, 1000, 5).draws; });
  const auto boot4 = with_threads(4, [&] { return multiplier_bootstrap(f, cov, 1000, 5).draws; });
  CHECK(boot1 == boot4);

  const MaxGaussSpec g{corr_of(cov.cov), 50000, 6};
  CHECK(with_threads(1, [&] { return max_gauss_draws(g); }) == with_threads(4, [&] { return max_gauss_draws(g); }));

  auto verify = [&] {
    const auto r = lab::verify_deterministic_bounds(200, sim, 0.2);
    std::vector<double> out{static_cast<double>(r.valid), static_cast<double>(r.event_count), r.max_theorem_ratio,
                            r.max_corollary_ratio};
    return out;
  };
  CHECK(with_threads(1, verify) == with_threads(4, verify));

  auto coverage = [&] {
    const auto t = lab::coverage_experiment(sim, {Method::Sidak, Method::Bootstrap}, 0.1, 100, 200, 7);
    std::vector<double> out;
    for (const auto& row : t.rows) out.insert(out.end(), {static_cast<double>(row.covered), row.mean_width, row.median_width});
    return out;
  };
  CHECK(with_threads(1, coverage) == with_threads(4, coverage));

  auto delta = [&] { return lab::estimate_delta_n(sim, 200, 20000, 8).value; };
  CHECK(with_threads(1, delta) == with_threads(4, delta));

  lab::DGPSpec pspec = spec;
  pspec.intercept = false;
  pspec.target = lab::Target::PartialCorrelation;
  const lab::Simulator psim(pspec);
  const auto pf = pcor_fit(psim.sample_covariates(2));
  CHECK(with_threads(1, [&] { return pcor_bootstrap(pf, 500, 3).draws; }) ==
        with_threads(4, [&] { return pcor_bootstrap(pf, 500, 3).draws; }));
}
