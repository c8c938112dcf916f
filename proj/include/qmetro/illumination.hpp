#ifndef QMETRO_ILLUMINATION_HPP
#define QMETRO_ILLUMINATION_HPP

#include <cstdint>
#include <vector>

namespace qmetro {

enum class IlluminationSource { kTwb, kSplitThermal };

// Photon-counting quantum-illumination protocol over correlated pixel pairs.
// Per pixel, `modes_per_pixel` spatio-temporal modes with `mu_per_mode`
// photons each are bundled; the object is a 50:50 beam splitter embedded in
// a multithermal background with mean `n_background` photons (detected) over
// `background_modes` modes.
struct IlluminationConfig {
  IlluminationSource source = IlluminationSource::kTwb;
  double mu_per_mode = 0.075;
  int modes_per_pixel = 1000;
  bool object_present = true;
  double object_reflectivity = 0.5;
  double n_background = 0.0;
  int background_modes = 1;
  double eta = 1.0;
  int pairs = 10000;  // correlated pixel pairs per covariance estimate
  std::uint64_t seed = 1;

  void validate() const;
};

struct CountPair {
  long probe = 0;      // arm crossing the object region
  long reference = 0;  // directly detected arm
};

// One frame of per-pixel-pair counts; deterministic under the seed.
std::vector<CountPair> sample_counts(const IlluminationConfig& config);

// Population covariance <N1 N2> - <N1><N2> over the pair set.
double covariance_statistic(const std::vector<CountPair>& samples);

// Detected-count statistics in closed form (for energy matching and the
// sampling cross-checks).
struct PixelStats {
  double probe_mean = 0.0;
  double ref_mean = 0.0;
  double probe_var = 0.0;
  double ref_var = 0.0;
  double covariance = 0.0;
};
PixelStats analytic_pixel_stats(const IlluminationConfig& config);

struct DiscriminationResult {
  double cov_mean_in = 0.0, cov_std_in = 0.0;    // fitted Gaussian, object in
  double cov_mean_out = 0.0, cov_std_out = 0.0;  // fitted Gaussian, object out
  double threshold = 0.0;
  double p_err = 0.5;
};

// Monte Carlo covariance distributions under both hypotheses, max-entropy
// Gaussian fits, and the threshold minimizing the error probability.
DiscriminationResult error_probability(const IlluminationConfig& config, int trials);

}  // namespace qmetro

#endif
