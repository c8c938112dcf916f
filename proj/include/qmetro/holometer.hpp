#ifndef QMETRO_HOLOMETER_HPP
#define QMETRO_HOLOMETER_HPP

#include <cmath>
#include <vector>

#include "qmetro/wick.hpp"

namespace qmetro {

// Two Michelson interferometers, each collapsed to its tau(phi_k) beam
// splitter; modes (a_k, b_k) -> (c_k, d_k), detectors after efficiency eta.
enum class HolometerFamily {
  kClassical,  // vacuum + coherent(mu) per interferometer
  kSqueezed,   // squeezed vacuum(lambda) + coherent(mu) per interferometer
  kTwb,        // twin beams(lambda) across a1,a2 + coherent(mu e^{i psi})
};

enum class HolometerObservable {
  kDiffProduct,  // dD1- dD2-, centered at the working point
  kDiffSquared,  // (N_c1 - N_c2 - <.>)^2, centered at the working point
};

struct HolometerConfig {
  HolometerFamily family = HolometerFamily::kClassical;
  double mu = 0.0;      // coherent photons per interferometer
  double lambda = 0.0;  // squeeze photons / twb photons per mode
  double psi = M_PI / 2;  // coherent phase against the twb (kTwb only)
  double eta = 1.0;
  double phi10 = 0.0, phi20 = 0.0;
  HolometerObservable observable = HolometerObservable::kDiffProduct;

  static HolometerConfig classical(double mu, double eta, double phi0 = M_PI / 2);
  static HolometerConfig squeezed(double mu, double lambda, double eta,
                                  double phi0 = M_PI / 2);
  static HolometerConfig twb(double mu, double lambda, double eta, double phi0 = 0.0,
                             double psi = M_PI / 2);
};

struct ZeroOrderUncertainty {
  double numerator = 0.0;    // sqrt(2 var[C]) at the working point
  double denominator = 0.0;  // |<d^2_{phi1 phi2} C>| at the working point
  double value = 0.0;        // numerator / denominator (inf when den = 0)
};

// Evaluated in extended precision: the twb working point lives on an exact
// cancellation that double cannot resolve.
ZeroOrderUncertainty covariance_uncertainty_zero(const HolometerConfig& config);

// R0 = U0(family)/U0(classical reference), the reference being the
// coherent-only pair at its own pi/2 working point.
double ratio_r0(const HolometerConfig& config);

// In the phi0 sweep each family is offset from its own optimal working
// point: phi_k = phi0 for the twin beams, phi_k = pi/2 + phi0/2 for the
// squeezed/classical product families.
enum class RatioSweep { kEta, kPhi0, kLambda };
struct RatioPoint {
  double x = 0.0;
  double r0 = 0.0;
};
std::vector<RatioPoint> ratio_curves(HolometerFamily family, RatioSweep vary,
                                     const std::vector<double>& grid,
                                     const HolometerConfig& base);

// Root eta* of R0_TWB(eta) = 1 on (lo, hi).
double twb_advantage_threshold(const HolometerConfig& base, double lo = 0.05,
                               double hi = 0.999);

// NRF(+-) of the monitored ports vs interferometer transmission tau, with
// psi at its optimizing value per sign (pi/2 for -, 0 for +).
struct NrfPoint {
  double tau = 0.0;
  double nrf_minus = 0.0;
  double nrf_plus = 0.0;
  double kappa = 0.0;  // mu(1-tau)/(tau lambda) regime separator
};
std::vector<NrfPoint> nrf_regimes(double mu, double lambda, double eta,
                                  const std::vector<double>& tau_grid);

// Single NRF evaluation at an explicit coherent phase psi.
double nrf_at(double mu, double lambda, double eta, double tau, double psi, int sign);

// Gaussian phase-jitter model of the correlated noise: identical marginals
// of std sigma_h; correlation 1 in the parallel configuration, 0 in the
// orthogonal one.
struct NoiseModel {
  bool parallel = true;
  double sigma_h = 0.0;
};

// E_x[<C(phi1, phi2)>] by Gauss-Hermite quadrature over the phase jitter.
double holographic_noise_average(const HolometerConfig& config, const NoiseModel& noise);

// E_x[<N_mode>]: single-interferometer statistics cannot tell the parallel
// and orthogonal configurations apart.
double holographic_marginal_mean(const HolometerConfig& config, const NoiseModel& noise,
                                 int mode);

// (E_par[C] - E_orth[C]) / <d^2 C>: recovers the phase covariance sigma_h^2.
double recovered_phase_covariance(const HolometerConfig& config, double sigma_h);

}  // namespace qmetro

#endif
