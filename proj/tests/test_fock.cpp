#include <cmath>
#include <complex>

#include "doctest.h"
#include "qmetro/errors.hpp"
#include "qmetro/fock.hpp"

using namespace qmetro;
using fock::Cplx;

TEST_CASE("coherent expansion is Poissonian") {
  const auto st = fock::coherent(1.0, 40);
  // p(2) = e^{-1}/2
  CHECK(std::norm(st.amplitudes()(2)) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-10));
  CHECK(fock::moment(st, number_monomial(0)).real() == doctest::Approx(1.0).epsilon(1e-10));
  const auto zero = fock::coherent(0.0, 10);
  CHECK(std::abs(zero.amplitudes()(0)) == doctest::Approx(1.0));
}

TEST_CASE("squeezed vacuum has even support only") {
  const auto st = fock::squeezed_vacuum(0.6, 0.9, 60);
  for (int n = 1; n < 60; n += 2) CHECK(std::abs(st.amplitudes()(n)) == 0.0);
  // <N> = sinh^2 r
  const double lam = std::sinh(0.6) * std::sinh(0.6);
  CHECK(fock::moment(st, number_monomial(0)).real() == doctest::Approx(lam).epsilon(1e-10));
  // var picked up in closed form: 2 l (l+1)
  const Monomial n2 = concat(number_monomial(0), number_monomial(0));
  const double var = fock::moment(st, n2).real() - lam * lam;
  CHECK(var == doctest::Approx(2.0 * lam * (lam + 1.0)).epsilon(1e-9));
}

TEST_CASE("twb matches thermal marginal") {
  const double lambda = 0.4;
  const auto st = fock::twb(lambda, 0.0, 40);
  // p(n) on one arm = l^n/(1+l)^{n+1}
  for (int n = 0; n < 5; ++n) {
    const double expected = std::pow(lambda, n) / std::pow(1.0 + lambda, n + 1);
    CHECK(std::norm(st.at({n, n})) == doctest::Approx(expected).epsilon(1e-10));
  }
  // thermal variance N(N+1) on one arm
  const Monomial n2 = concat(number_monomial(0), number_monomial(0));
  const double mean = fock::moment(st, number_monomial(0)).real();
  const double var = fock::moment(st, n2).real() - mean * mean;
  CHECK(mean == doctest::Approx(lambda).epsilon(1e-10));
  CHECK(var == doctest::Approx(lambda * (lambda + 1.0)).epsilon(1e-9));
  // <N1 N2> = l(2l+1)
  const Monomial n1n2 = concat(number_monomial(0), number_monomial(1));
  CHECK(fock::moment(st, n1n2).real() ==
        doctest::Approx(lambda * (2.0 * lambda + 1.0)).epsilon(1e-9));
}

TEST_CASE("cutoff leak is detected") {
  CHECK_THROWS_AS(fock::coherent(3.0, 6), NumericError);
  CHECK_NOTHROW(fock::coherent(1.5, 40));
}

TEST_CASE("single photon through a balanced beam splitter") {
  auto st = fock::fock_basis({1, 0}, 10);
  fock::apply_beam_splitter(st, 0, 1, M_PI / 4, 0.0);
  CHECK(std::abs(st.at({1, 0})) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(std::abs(st.at({0, 1})) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  // opposite signs across the two ports
  const Cplx prod = st.at({1, 0}) * std::conj(st.at({0, 1}));
  CHECK(prod.real() < 0.0);
}

TEST_CASE("factored and block-exponential evolutions cross-check") {
  // Squeezed tails fall off only like tanh^n, so the comparison needs the
  // full two-mode cutoff to isolate method error from truncation.
  for (double theta : {0.1, 0.25}) {
    auto a = fock::coherent(0.8, 40).tensor(fock::squeezed_vacuum(0.4, 0.3, 40));
    auto b = a;
    fock::apply_beam_splitter(a, 0, 1, theta, 0.35, fock::EvolveMethod::kFactored);
    fock::apply_beam_splitter(b, 0, 1, theta, 0.35, fock::EvolveMethod::kBlockExp);
    CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-6);
  }
  for (double r : {0.2, 0.4}) {
    auto a = fock::coherent(0.5, 40).tensor(fock::coherent(-0.3, 40));
    auto b = a;
    fock::apply_two_mode_squeezer(a, 0, 1, r, 0.7, fock::EvolveMethod::kFactored);
    fock::apply_two_mode_squeezer(b, 0, 1, r, 0.7, fock::EvolveMethod::kBlockExp);
    CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-6);
  }
  {
    auto a = fock::coherent(0.4, 40);
    auto b = a;
    fock::apply_squeezer(a, 0, 0.4, 1.1, fock::EvolveMethod::kFactored);
    fock::apply_squeezer(b, 0, 0.4, 1.1, fock::EvolveMethod::kBlockExp);
    CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-6);
    auto c = fock::vacuum(1, 40);
    auto d = c;
    fock::apply_displacement(c, 0, Cplx(0.9, -0.4), fock::EvolveMethod::kFactored);
    fock::apply_displacement(d, 0, Cplx(0.9, -0.4), fock::EvolveMethod::kBlockExp);
    CHECK((c.amplitudes() - d.amplitudes()).norm() < 1e-6);
  }
}

TEST_CASE("two-mode squeezer on vacuum reproduces the twb expansion") {
  auto st = fock::vacuum(2, 40);
  fock::apply_two_mode_squeezer(st, 0, 1, 0.5, 0.0);
  const double lambda = std::sinh(0.5) * std::sinh(0.5);
  const auto ref = fock::twb(lambda, 0.0, 40);
  CHECK((st.amplitudes() - ref.amplitudes()).norm() < 1e-9);
}

TEST_CASE("displacement builds the coherent expansion") {
  auto st = fock::vacuum(1, 40);
  fock::apply_displacement(st, 0, Cplx(1.0, 0.5));
  const auto ref = fock::coherent(Cplx(1.0, 0.5), 40);
  CHECK((st.amplitudes() - ref.amplitudes()).norm() < 1e-9);
}

TEST_CASE("identity parameters leave states unchanged") {
  auto st = fock::coherent(0.7, 20);
  auto ref = st;
  fock::apply_phase(st, 0, 0.0);
  fock::apply_squeezer(st, 0, 0.0, 0.0);
  fock::apply_displacement(st, 0, 0.0);
  CHECK((st.amplitudes() - ref.amplitudes()).norm() < 1e-12);
}

TEST_CASE("phase evolution matches a e^{-i phi}") {
  auto st = fock::coherent(1.0, 30);
  fock::apply_phase(st, 0, M_PI / 2);
  // <a> = -i
  Monomial a_op = {{0, false}};
  const Cplx amp = fock::moment(st, a_op);
  CHECK(amp.real() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(amp.imag() == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("moment handles creation overflow by promotion") {
  auto st = fock::fock_basis({9}, 10);
  // <a a+> = n+1 = 10 even at the top level
  Monomial aad = {{0, false}, {0, true}};
  CHECK(fock::moment(st, aad).real() == doctest::Approx(10.0));
}

TEST_CASE("odd moments vanish on squeezed vacuum") {
  const auto st = fock::squeezed_vacuum(0.7, 0.2, 40);
  Monomial a = {{0, false}};
  Monomial aaa = {{0, false}, {0, false}, {0, true}};
  CHECK(std::abs(fock::moment(st, a)) < 1e-12);
  CHECK(std::abs(fock::moment(st, aaa)) < 1e-12);
}

TEST_CASE("detect: eta = 1 returns the ideal distribution") {
  const auto st = fock::coherent(1.0, 30);
  const auto dist = fock::detect(st, {1.0});
  CHECK(dist.prob({2}) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-10));
  CHECK(dist.mean(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("detect: single photon thinning") {
  const auto st = fock::fock_basis({1}, 6);
  const auto dist = fock::detect(st, {0.37});
  CHECK(dist.prob({1}) == doctest::Approx(0.37));
  CHECK(dist.prob({0}) == doctest::Approx(0.63));
}

TEST_CASE("detect: joint thinned twb matches the analytic joint-thermal form") {
  const double lambda = 0.2, eta = 0.7;
  const auto st = fock::twb(lambda, 0.0, 30);
  const auto dist = fock::detect(st, {eta, eta});
  // P(m1,m2) = sum_n p_th(n) Bin(m1;n,eta) Bin(m2;n,eta)
  auto binom = [](int n, int m, double e) {
    double c = 1.0;
    for (int i = 0; i < m; ++i) c *= static_cast<double>(n - i) / (i + 1);
    return c * std::pow(e, m) * std::pow(1.0 - e, n - m);
  };
  for (int m1 = 0; m1 < 4; ++m1) {
    for (int m2 = 0; m2 < 4; ++m2) {
      double expect = 0.0;
      for (int n = std::max(m1, m2); n < 30; ++n) {
        const double pth = std::pow(lambda, n) / std::pow(1.0 + lambda, n + 1);
        expect += pth * binom(n, m1, eta) * binom(n, m2, eta);
      }
      CHECK(dist.prob({m1, m2}) == doctest::Approx(expect).epsilon(1e-8));
    }
  }
  // detected covariance: eta^2 l (1+l)
  CHECK(dist.covariance(0, 1) ==
        doctest::Approx(eta * eta * lambda * (1.0 + lambda)).epsilon(1e-8));
}

TEST_CASE("evolve aborts on large truncation leak") {
  auto st = fock::coherent(1.4, 6, 1e-1);  // deliberately tight space
  CHECK_THROWS_AS(
      fock::apply_displacement(st, 0, Cplx(1.5, 0.0), fock::EvolveMethod::kFactored),
      NumericError);
}
