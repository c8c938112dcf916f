#ifndef QMETRO_MOMENTS_HPP
#define QMETRO_MOMENTS_HPP

#include <complex>
#include <utility>
#include <vector>

#include "qmetro/gaussian.hpp"
#include "qmetro/ladder.hpp"
#include "qmetro/wick.hpp"

namespace qmetro {

// Contraction table of a Gaussian state in the (a, a+) basis.
WickContext<double> wick_context(const GaussianState& state);

// Expectation of an ordered ladder-operator product (up to 8 operators).
std::complex<double> wick_moment(const GaussianState& state, const Monomial& monomial);

struct NumberStats {
  std::vector<double> mean;      // <N_k> per mode
  std::vector<double> var;       // var[N_k] per mode
  std::vector<double> pair_cov;  // <dN_a dN_b> per requested pair
};

NumberStats number_stats(const GaussianState& state,
                         const std::vector<std::pair<int, int>>& pairs = {});

// Photon-number mean and variance of one mode.
std::pair<double, double> photon_mean_var(const GaussianState& state, int mode);

// NRF(+-) = var(N_1 +- N_2) / <N_1 + N_2>; sign = +1 or -1.
double nrf(const GaussianState& state, int mode_a, int mode_b, int sign);

}  // namespace qmetro

#endif
