#include <cmath>
#include <random>

#include "doctest.h"
#include "qmetro/errors.hpp"
#include "qmetro/gaussian.hpp"

using namespace qmetro;

TEST_CASE("vacuum convention") {
  const auto v = GaussianState::vacuum(1);
  CHECK(v.mean().norm() == 0.0);
  CHECK((v.cov() - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  CHECK(v.mean_photons(0) == doctest::Approx(0.0));
}

TEST_CASE("coherent moments") {
  const std::complex<double> alpha(1.2, -0.7);
  const auto c = GaussianState::coherent(alpha);
  CHECK(c.mode_amplitude(0).real() == doctest::Approx(alpha.real()));
  CHECK(c.mode_amplitude(0).imag() == doctest::Approx(alpha.imag()));
  CHECK(c.mean_photons(0) == doctest::Approx(std::norm(alpha)));
}

TEST_CASE("squeezed vacuum photon statistics anchor") {
  // sinh^2 r = 4 -> <N> = 4 (variance checked in the moments tests)
  const double r = std::asinh(2.0);
  const auto s = GaussianState::squeezed(0.0, r);
  CHECK(s.mean_photons(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.cov()(0, 0) == doctest::Approx(std::exp(2.0 * r)));
  CHECK(s.cov()(1, 1) == doctest::Approx(std::exp(-2.0 * r)));
}

TEST_CASE("thermal and twb basics") {
  const auto t = GaussianState::thermal(1.7);
  CHECK(t.mean_photons(0) == doctest::Approx(1.7));
  const auto twb = GaussianState::twb(0.8);
  CHECK(twb.mean_photons(0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(twb.mean_photons(1) == doctest::Approx(0.8).epsilon(1e-12));
  // marginal of each arm is thermal: diagonal covariance block (2l+1) I
  CHECK(twb.cov()(0, 0) == doctest::Approx(2.0 * 0.8 + 1.0));
  CHECK(twb.cov()(1, 1) == doctest::Approx(2.0 * 0.8 + 1.0));
  CHECK_THROWS_AS(GaussianState::thermal(-0.1), ValidationError);
  CHECK_THROWS_AS(GaussianState::twb(-1.0), ValidationError);
}

TEST_CASE("symplectic condition for every constructor") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 25; ++rep) {
    CHECK(beam_splitter(u(rng), u(rng)).symplectic_defect() < 1e-10);
    CHECK(phase_shift(u(rng)).symplectic_defect() < 1e-10);
    CHECK(single_mode_squeezer(std::abs(u(rng)), u(rng)).symplectic_defect() < 1e-10);
    CHECK(two_mode_squeezer(std::abs(u(rng)), u(rng)).symplectic_defect() < 1e-10);
    CHECK(displacement({u(rng), u(rng)}).symplectic_defect() < 1e-10);
  }
}

TEST_CASE("beam splitter special cases") {
  // phi = 0: identity
  const auto id = beam_splitter(0.0, 0.0);
  CHECK((id.matrix - Eigen::MatrixXd::Identity(4, 4)).norm() == doctest::Approx(0.0));

  // phi = pi/2, theta = 0: mirror a->b, b->-a
  const auto mirror = beam_splitter(M_PI / 2, 0.0);
  auto st = GaussianState::coherent(1.0).tensor(GaussianState::vacuum(1));
  st = apply(mirror, st, {0, 1});
  CHECK(std::abs(st.mode_amplitude(0)) == doctest::Approx(0.0));
  CHECK(st.mode_amplitude(1).real() == doctest::Approx(-1.0));

  // coherent through tau: amplitudes (sqrt(tau) a, -sqrt(1-tau) a)
  const double theta = 0.63;
  auto st2 = GaussianState::coherent(1.3).tensor(GaussianState::vacuum(1));
  st2 = apply(beam_splitter(theta, 0.0), st2, {0, 1});
  CHECK(st2.mode_amplitude(0).real() == doctest::Approx(1.3 * std::cos(theta)));
  CHECK(st2.mode_amplitude(1).real() == doctest::Approx(-1.3 * std::sin(theta)));
  // energy conserved
  CHECK(st2.total_mean_photons() == doctest::Approx(1.3 * 1.3).epsilon(1e-12));
}

TEST_CASE("phase shift rotation and group property") {
  const auto p0 = phase_shift(0.0);
  CHECK((p0.matrix - Eigen::MatrixXd::Identity(2, 2)).norm() == doctest::Approx(0.0));
  // phi = pi/2: a -> -i a
  auto st = GaussianState::coherent(1.0);
  st = apply(phase_shift(M_PI / 2), st, {0});
  CHECK(st.mode_amplitude(0).real() == doctest::Approx(0.0));
  CHECK(st.mode_amplitude(0).imag() == doctest::Approx(-1.0));
  // composition
  const auto a = phase_shift(0.4), b = phase_shift(1.1), c = phase_shift(1.5);
  CHECK((a.then(b).matrix - c.matrix).norm() < 1e-12);
}

TEST_CASE("two-mode squeezer generates the twb state") {
  const double r = 0.5;
  const double lambda = std::sinh(r) * std::sinh(r);
  auto st = GaussianState::vacuum(2);
  st = apply(two_mode_squeezer(r), st, {0, 1});
  const auto ref = GaussianState::twb(lambda);
  CHECK((st.cov() - ref.cov()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((st.mean() - ref.mean()).norm() < 1e-12);
  // |t|^2 = N/(N+1)
  const double t2 = std::tanh(r) * std::tanh(r);
  CHECK(t2 == doctest::Approx(lambda / (lambda + 1.0)));
}

TEST_CASE("apply validates mode indices") {
  auto st = GaussianState::vacuum(2);
  CHECK_THROWS_AS(apply(beam_splitter(0.3, 0.0), st, {0, 0}), ValidationError);
  CHECK_THROWS_AS(apply(beam_splitter(0.3, 0.0), st, {0, 5}), ValidationError);
  CHECK_THROWS_AS(apply(phase_shift(0.3), st, {-1}), ValidationError);
}

TEST_CASE("loss channel composition and endpoints") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int rep = 0; rep < 10; ++rep) {
    const double e1 = u(rng), e2 = u(rng);
    auto st = GaussianState::squeezed({1.1, -0.3}, 0.6, 0.8);
    const auto once = apply_loss(apply_loss(st, e1, {0}), e2, {0});
    const auto combined = apply_loss(st, e1 * e2, {0});
    CHECK((once.cov() - combined.cov()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((once.mean() - combined.mean()).norm() < 1e-12);
  }
  auto st = GaussianState::squeezed({0.4, 0.2}, 0.9, 0.0);
  const auto unity = apply_loss(st, 1.0, {0});
  CHECK((unity.cov() - st.cov()).norm() == doctest::Approx(0.0));
  const auto dark = apply_loss(st, 0.0, {0});
  CHECK((dark.cov() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(dark.mean().norm() == doctest::Approx(0.0));
}

TEST_CASE("purity preserved by symplectic ops") {
  auto st = GaussianState::squeezed({0.5, 0.1}, 0.7, 0.3).tensor(
      GaussianState::coherent({0.2, 0.9}));
  CHECK(st.is_pure());
  st = apply(beam_splitter(0.7, 0.2), st, {0, 1});
  st = apply(two_mode_squeezer(0.4, 1.0), st, {0, 1});
  st = apply(phase_shift(0.9), st, {1});
  CHECK(st.is_pure());
  CHECK_NOTHROW(st.check_physical());
  const auto lossy = apply_loss(st, 0.5, {0});
  CHECK(!lossy.is_pure());
  CHECK_NOTHROW(lossy.check_physical());
}

TEST_CASE("energy bookkeeping of the two-mode squeezer on vacuum") {
  const double r = 0.8;
  auto st = apply(two_mode_squeezer(r), GaussianState::vacuum(2), {0, 1});
  CHECK(st.total_mean_photons() == doctest::Approx(2.0 * std::sinh(r) * std::sinh(r)));
}
