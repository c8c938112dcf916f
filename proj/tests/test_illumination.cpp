#include <cmath>

#include "doctest.h"
#include "qmetro/errors.hpp"
#include "qmetro/illumination.hpp"

using namespace qmetro;

namespace {

IlluminationConfig base_config() {
  IlluminationConfig c;
  c.mu_per_mode = 0.075;
  c.modes_per_pixel = 200;
  c.eta = 0.8;
  c.pairs = 10000;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("no background, no object: probe arm stays dark") {
  IlluminationConfig c = base_config();
  c.object_present = false;
  c.n_background = 0.0;
  for (const auto& s : sample_counts(c)) CHECK(s.probe == 0);
}

TEST_CASE("sampled statistics match the analytic forms within 5 sigma") {
  for (auto source : {IlluminationSource::kTwb, IlluminationSource::kSplitThermal}) {
    IlluminationConfig c = base_config();
    c.source = source;
    c.n_background = 5.0;
    c.background_modes = 57;
    const auto samples = sample_counts(c);
    const auto st = analytic_pixel_stats(c);
    const double m = static_cast<double>(c.pairs);

    double probe_mean = 0.0, ref_mean = 0.0;
    for (const auto& s : samples) {
      probe_mean += s.probe;
      ref_mean += s.reference;
    }
    probe_mean /= m;
    ref_mean /= m;
    CHECK(std::abs(probe_mean - st.probe_mean) < 5.0 * std::sqrt(st.probe_var / m));
    CHECK(std::abs(ref_mean - st.ref_mean) < 5.0 * std::sqrt(st.ref_var / m));

    // covariance estimator: sampling std ~ sqrt((v1 v2 + cov^2)/M)
    const double cov = covariance_statistic(samples);
    const double cov_se =
        std::sqrt((st.probe_var * st.ref_var + st.covariance * st.covariance) / m);
    CHECK(std::abs(cov - st.covariance) < 5.0 * cov_se);
  }
}

TEST_CASE("twin-beam covariance carries the quantum (1+mu)/mu enhancement") {
  IlluminationConfig q = base_config();
  IlluminationConfig cl = base_config();
  cl.source = IlluminationSource::kSplitThermal;
  const auto sq = analytic_pixel_stats(q);
  const auto sc = analytic_pixel_stats(cl);
  // energy matching is exact
  CHECK(sq.probe_mean == doctest::Approx(sc.probe_mean).epsilon(1e-12));
  CHECK(sq.ref_mean == doctest::Approx(sc.ref_mean).epsilon(1e-12));
  // covariance ratio (1+mu)/mu
  CHECK(sq.covariance / sc.covariance ==
        doctest::Approx((1.0 + q.mu_per_mode) / q.mu_per_mode).epsilon(1e-12));
}

TEST_CASE("object absent: expected covariance vanishes") {
  for (auto source : {IlluminationSource::kTwb, IlluminationSource::kSplitThermal}) {
    IlluminationConfig c = base_config();
    c.source = source;
    c.object_present = false;
    c.n_background = 10.0;
    c.background_modes = 57;
    const auto st = analytic_pixel_stats(c);
    CHECK(st.covariance == 0.0);
    const auto samples = sample_counts(c);
    const double cov_se =
        std::sqrt(st.probe_var * st.ref_var / static_cast<double>(c.pairs));
    CHECK(std::abs(covariance_statistic(samples)) < 5.0 * cov_se);
  }
}

TEST_CASE("constant counts give zero covariance") {
  std::vector<CountPair> flat(100, CountPair{3, 7});
  CHECK(covariance_statistic(flat) == 0.0);
}

TEST_CASE("determinism under the seed") {
  IlluminationConfig c = base_config();
  c.n_background = 3.0;
  const auto a = sample_counts(c);
  const auto b = sample_counts(c);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].probe == b[i].probe);
    CHECK(a[i].reference == b[i].reference);
  }
}

TEST_CASE("quantum protocol beats the classical one in the noisy regime") {
  IlluminationConfig q = base_config();
  q.pairs = 3000;
  q.n_background = 10.0;
  q.background_modes = 57;
  IlluminationConfig cl = q;
  cl.source = IlluminationSource::kSplitThermal;
  const auto rq = error_probability(q, 120);
  const auto rc = error_probability(cl, 120);
  CHECK(rq.p_err < rc.p_err);
  CHECK(rq.p_err >= 0.0);
  CHECK(rc.p_err <= 0.5);
  // threshold sits between the two hypothesis means
  CHECK(rq.threshold > rq.cov_mean_out);
  CHECK(rq.threshold < rq.cov_mean_in);
}

TEST_CASE("validation errors") {
  IlluminationConfig c = base_config();
  c.mu_per_mode = -1.0;
  CHECK_THROWS_AS(sample_counts(c), ValidationError);
  c = base_config();
  c.pairs = 1;
  CHECK_THROWS_AS(sample_counts(c), ValidationError);
  c = base_config();
  CHECK_THROWS_AS(error_probability(c, 10), ValidationError);
}
