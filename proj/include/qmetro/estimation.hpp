#ifndef QMETRO_ESTIMATION_HPP
#define QMETRO_ESTIMATION_HPP

#include <functional>
#include <utility>
#include <vector>

#include "qmetro/gaussian.hpp"

namespace qmetro {

// Family of outcome distributions p(x|phi): either an analytic Gaussian with
// mean m(phi) and std s(phi), or a discrete table over a fixed outcome set.
class OutcomeModel {
 public:
  static OutcomeModel analytic_gaussian(std::function<double(double)> mean,
                                        std::function<double(double)> stddev);
  static OutcomeModel discrete(std::function<std::vector<double>(double)> table);

  bool is_gaussian() const { return gaussian_; }
  double mean(double phi) const { return mean_(phi); }
  double stddev(double phi) const { return stddev_(phi); }
  std::vector<double> table(double phi) const;

 private:
  bool gaussian_ = true;
  std::function<double(double)> mean_, stddev_;
  std::function<std::vector<double>(double)> table_;
};

// Centered finite difference with one Richardson refinement, step h.
double differentiate(const std::function<double(double)>& f, double x, double h = 1e-4);

// F(phi) = E[(d/dphi log p)^2]; Gaussian closed form m'^2/s^2 + 2 s'^2/s^2.
double fisher_information(const OutcomeModel& model, double phi);

// H = 4 var[G] for a pure probe under a unitary with generator
// G = sum_k weight_k N_k. Mixed probes are rejected.
struct GeneratorSpec {
  std::vector<int> modes;
  std::vector<double> weights;  // defaults to 1 per mode when empty
};
double qfi_pure_unitary(const GaussianState& probe, const GeneratorSpec& gen);

// S(phi) = sqrt(var[O])/|d<O>/dphi|; the removable 0/0 at a dark fringe is
// resolved by the ratio of slopes.
double sensitivity(const OutcomeModel& model, double phi);

// Coarse 64-point grid followed by golden-section refinement.
std::pair<double, double> maximize_scalar(const std::function<double(double)>& f,
                                          double lo, double hi, double tol = 1e-9);
std::pair<double, double> minimize_scalar(const std::function<double(double)>& f,
                                          double lo, double hi, double tol = 1e-9);

// Least-squares slope of log(y) vs log(x); needs >= 8 points over >= 2
// decades. The lowest decade is dropped when curvature is detected.
struct ScalingFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double max_residual = 0.0;
  bool dropped_low_decade = false;
};
ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qmetro

#endif
