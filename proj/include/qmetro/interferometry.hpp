#ifndef QMETRO_INTERFEROMETRY_HPP
#define QMETRO_INTERFEROMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmetro/estimation.hpp"
#include "qmetro/gaussian.hpp"

namespace qmetro {

// Whole Mach-Zehnder/Michelson collapsed to one beam splitter:
// c = cos(phi/2) a + sin(phi/2) b, d = cos(phi/2) b - sin(phi/2) a,
// transmissivity tau(phi) = cos^2(phi/2).
SymplecticOp mz_effective_bs(double phi);

// One single-mode input port.
struct PortInput {
  enum class Kind { kVacuum, kCoherent, kSqueezed, kSqueezedCoherent, kThermal };
  Kind kind = Kind::kVacuum;
  double amplitude = 0.0;  // coherent alpha (real by convention here)
  double alpha_phase = 0.0;
  double squeeze_r = 0.0;
  double squeeze_psi = 0.0;
  double thermal_n = 0.0;

  static PortInput vacuum() { return {}; }
  static PortInput coherent(double alpha, double phase = 0.0);
  static PortInput squeezed_vacuum(double r, double psi = 0.0);
  static PortInput squeezed_coherent(double alpha, double r, double psi = 0.0);
  GaussianState make() const;
  double mean_photons() const;
};

enum class FirstStage { kBalancedBS, kOpa };
enum class DetectionStage { kBalancedBSDiff, kOpaSum, kSinglePortD };
enum class WorkingPoint { kHalfPi, kDarkPort };

struct InterferometerConfig {
  FirstStage first_stage = FirstStage::kBalancedBS;
  double first_opa_r = 0.0;   // OPA gain of an active first stage
  DetectionStage detection = DetectionStage::kBalancedBSDiff;
  double det_opa_r = 0.0;     // OPA gain of an active detection stage
  PortInput input_a, input_b;
  double eta = 1.0;           // detector efficiency, both ports
  WorkingPoint working_point = WorkingPoint::kHalfPi;
};

// Mean and variance of the configured observable at phase phi.
struct FringePoint {
  double mean = 0.0;
  double variance = 0.0;
};
FringePoint fringe_observable(const InterferometerConfig& config, double phi);

// Ready-made sensitivity model S(phi) = sqrt(var)/|d mean/d phi|.
OutcomeModel fringe_model(const InterferometerConfig& config);
double config_sensitivity(const InterferometerConfig& config, double phi);

// Monte Carlo fringe samples: per phi, `shots` Gaussian draws with the
// analytic moments; returns per-point sample mean and sample std.
struct FringeSample {
  double phi = 0.0;
  double mean = 0.0;
  double sample_std = 0.0;
};
std::vector<FringeSample> simulate_fringes(const InterferometerConfig& config,
                                           const std::vector<double>& phi_grid,
                                           int shots, std::uint64_t seed);

// R(phi) = S_sq(phi)/S_cl(phi) for equal coherent power.
std::vector<double> sensitivity_ratio(const InterferometerConfig& config_sq,
                                      const InterferometerConfig& config_cl,
                                      const std::vector<double>& phi_grid);

enum class ConfigFamily {
  kPassivePassive,
  kPassiveActive,
  kActivePassive,
  kActiveActive,
};

struct Optimum {
  double sensitivity = 0.0;
  double phi = 0.0;
  InterferometerConfig config;
  std::string input_structure;  // e.g. "two squeezed vacua"
};

// Minimize S over the input split (and detection OPA gain where active)
// under the N_tot energy constraint, by nested 1-D sweeps.
Optimum optimize_configuration(ConfigFamily family, double n_tot, double eta,
                               double det_opa_r_max = 6.0);

}  // namespace qmetro

#endif
