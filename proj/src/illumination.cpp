#include "qmetro/illumination.hpp"

#include <cmath>

#include "qmetro/errors.hpp"
#include "qmetro/estimation.hpp"
#include "qmetro/rng.hpp"

namespace qmetro {

void IlluminationConfig::validate() const {
  if (!(mu_per_mode > 0.0)) throw ValidationError("illumination: mu_per_mode must be > 0");
  if (modes_per_pixel < 1) throw ValidationError("illumination: modes_per_pixel must be >= 1");
  if (!(n_background >= 0.0)) throw ValidationError("illumination: n_background must be >= 0");
  if (background_modes < 1) throw ValidationError("illumination: background_modes must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("illumination: eta must lie in (0,1]");
  if (pairs < 2) throw ValidationError("illumination: need at least 2 pixel pairs");
  if (!(object_reflectivity >= 0.0 && object_reflectivity <= 1.0))
    throw ValidationError("illumination: reflectivity must lie in [0,1]");
}

namespace {

CountPair draw_pair(const IlluminationConfig& cfg, Rng& rng) {
  const double t_modes = static_cast<double>(cfg.modes_per_pixel);
  const double p_probe = cfg.eta * cfg.object_reflectivity;
  CountPair out;

  if (cfg.source == IlluminationSource::kTwb) {
    // shared multithermal intensity, one conditional Poisson draw for both
    // arms (twin beams carry identical photon numbers before detection)
    const double intensity = rng.gamma(t_modes, cfg.mu_per_mode);
    const long n_shared = rng.poisson(intensity);
    out.reference = rng.binomial(n_shared, cfg.eta);
    if (cfg.object_present) out.probe = rng.binomial(n_shared, p_probe);
  } else {
    // one multithermal beam at twice the energy, split 50:50
    const double intensity = rng.gamma(t_modes, 2.0 * cfg.mu_per_mode);
    const long n_total = rng.poisson(intensity);
    const long n_probe = rng.binomial(n_total, 0.5);
    out.reference = rng.binomial(n_total - n_probe, cfg.eta);
    if (cfg.object_present) out.probe = rng.binomial(n_probe, p_probe);
  }
  if (cfg.n_background > 0.0) {
    const double bg = rng.gamma(static_cast<double>(cfg.background_modes),
                                cfg.n_background / cfg.background_modes);
    out.probe += rng.poisson(bg);
  }
  return out;
}

}  // namespace

std::vector<CountPair> sample_counts(const IlluminationConfig& config) {
  config.validate();
  Rng rng = Rng::substream(config.seed, 0);
  std::vector<CountPair> out(config.pairs);
  for (auto& pair : out) pair = draw_pair(config, rng);
  return out;
}

double covariance_statistic(const std::vector<CountPair>& samples) {
  if (samples.size() < 2) throw ValidationError("covariance_statistic: need >= 2 pairs");
  const double inv = 1.0 / static_cast<double>(samples.size());
  double m1 = 0.0, m2 = 0.0;
  for (const auto& s : samples) {
    m1 += static_cast<double>(s.probe);
    m2 += static_cast<double>(s.reference);
  }
  m1 *= inv;
  m2 *= inv;
  double cov = 0.0;
  for (const auto& s : samples)
    cov += (static_cast<double>(s.probe) - m1) * (static_cast<double>(s.reference) - m2);
  return cov * inv;  // population convention
}

PixelStats analytic_pixel_stats(const IlluminationConfig& config) {
  config.validate();
  const double t_modes = static_cast<double>(config.modes_per_pixel);
  const double mean_n = t_modes * config.mu_per_mode;
  const double p_probe = config.object_present ? config.eta * config.object_reflectivity : 0.0;
  const double bg_mean = config.n_background;
  const double bg_var =
      config.n_background * (1.0 + config.n_background / config.background_modes);

  PixelStats st;
  st.ref_mean = config.eta * mean_n;
  st.probe_mean = p_probe * mean_n + bg_mean;
  if (config.source == IlluminationSource::kTwb) {
    // var(n) = T mu (1 + mu); thinned: p^2 var + p(1-p) mean
    const double var_n = mean_n * (1.0 + config.mu_per_mode);
    st.ref_var = config.eta * config.eta * var_n + config.eta * (1.0 - config.eta) * mean_n;
    st.probe_var = p_probe * p_probe * var_n + p_probe * (1.0 - p_probe) * mean_n + bg_var;
    st.covariance = p_probe * config.eta * var_n;
  } else {
    // each split arm: mean_n photons, var = var(n_tot)/4 + mean(n_tot)/4,
    // arm covariance (var(n_tot) - mean(n_tot))/4 = T mu^2
    const double var_tot = 2.0 * mean_n * (1.0 + 2.0 * config.mu_per_mode);
    const double arm_var = 0.25 * var_tot + 0.5 * mean_n;
    const double arm_cov = 0.25 * (var_tot - 2.0 * mean_n);
    st.ref_var = config.eta * config.eta * arm_var + config.eta * (1.0 - config.eta) * mean_n;
    st.probe_var = p_probe * p_probe * arm_var + p_probe * (1.0 - p_probe) * mean_n + bg_var;
    st.covariance = p_probe * config.eta * arm_cov;
  }
  return st;
}

DiscriminationResult error_probability(const IlluminationConfig& config, int trials) {
  config.validate();
  if (trials < 100) throw ValidationError("error_probability: need >= 100 trials");

  auto covariances = [&](bool present, int hyp_index) {
    std::vector<double> out(trials);
    for (int t = 0; t < trials; ++t) {
      IlluminationConfig cfg = config;
      cfg.object_present = present;
      cfg.seed = Rng::splitmix64(config.seed ^ (0x9e37ULL * (hyp_index * trials + t + 1)));
      out[t] = covariance_statistic(sample_counts(cfg));
    }
    return out;
  };
  auto fit = [&](const std::vector<double>& xs, double* mean, double* stddev) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= (xs.size() - 1);
    *mean = m;
    *stddev = std::sqrt(v);
  };

  DiscriminationResult res;
  const auto cov_in = covariances(true, 0);
  const auto cov_out = covariances(false, 1);
  fit(cov_in, &res.cov_mean_in, &res.cov_std_in);
  fit(cov_out, &res.cov_mean_out, &res.cov_std_out);

  if (std::abs(res.cov_mean_in - res.cov_mean_out) <
      1e-12 * (std::abs(res.cov_mean_in) + std::abs(res.cov_mean_out) + 1.0))
    throw NumericError("error_probability: hypothesis distributions coincide");

  // max-entropy Gaussian assignment; threshold minimizes the mean of the
  // two tail errors
  auto tail_above = [](double t, double m, double s) {
    return 0.5 * std::erfc((t - m) / (s * std::sqrt(2.0)));
  };
  auto perr_at = [&](double t) {
    const double wrong_out = tail_above(t, res.cov_mean_out, res.cov_std_out);
    const double wrong_in = 1.0 - tail_above(t, res.cov_mean_in, res.cov_std_in);
    return 0.5 * (wrong_out + wrong_in);
  };
  const double lo = std::min(res.cov_mean_in, res.cov_mean_out);
  const double hi = std::max(res.cov_mean_in, res.cov_mean_out);
  auto [t_best, neg_p] = maximize_scalar([&](double t) { return -perr_at(t); }, lo, hi, 
                                         1e-9 * (hi - lo) + 1e-300);
  res.threshold = t_best;
  res.p_err = std::min(0.5, -neg_p);
  return res;
}

}  // namespace qmetro
