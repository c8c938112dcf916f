#include "qmetro/holometer.hpp"

#include <Eigen/Eigenvalues>
#include <limits>

#include "qmetro/errors.hpp"

namespace qmetro {

HolometerConfig HolometerConfig::classical(double mu, double eta, double phi0) {
  HolometerConfig c;
  c.family = HolometerFamily::kClassical;
  c.mu = mu;
  c.eta = eta;
  c.phi10 = c.phi20 = phi0;
  c.observable = HolometerObservable::kDiffProduct;
  return c;
}

HolometerConfig HolometerConfig::squeezed(double mu, double lambda, double eta,
                                          double phi0) {
  HolometerConfig c;
  c.family = HolometerFamily::kSqueezed;
  c.mu = mu;
  c.lambda = lambda;
  c.eta = eta;
  c.phi10 = c.phi20 = phi0;
  c.observable = HolometerObservable::kDiffProduct;
  return c;
}

HolometerConfig HolometerConfig::twb(double mu, double lambda, double eta, double phi0,
                                     double psi) {
  HolometerConfig c;
  c.family = HolometerFamily::kTwb;
  c.mu = mu;
  c.lambda = lambda;
  c.eta = eta;
  c.psi = psi;
  c.phi10 = c.phi20 = phi0;
  c.observable = HolometerObservable::kDiffSquared;
  return c;
}

namespace {

void validate(const HolometerConfig& c) {
  if (!(c.mu >= 0.0) || !(c.lambda >= 0.0))
    throw ValidationError("holometer: mu and lambda must be >= 0");
  if (!(c.eta >= 0.0 && c.eta <= 1.0))
    throw ValidationError("holometer: eta must lie in [0,1]");
}

// Mode order: 0 = c1, 1 = c2, 2 = d1, 3 = d2. The a_k inputs carry the
// quantum resource, the b_k inputs the coherent fields; everything in the
// chain is passive, so means and ladder contractions transform linearly.
template <typename R>
WickContext<R> build_context(const HolometerConfig& cfg, R phi1, R phi2) {
  using C = std::complex<R>;
  using Ops = ScalarOps<R>;
  const int n = 4;
  const int n2 = 2 * n;

  // input-side tables in mode order a1, a2, b1, b2
  std::vector<C> mean_in(n, C(R(0), R(0)));
  std::vector<C> aa(n * n, C(R(0), R(0)));    // <da_i da_j>
  std::vector<C> adag(n * n, C(R(0), R(0)));  // <da_i da_j+>
  for (int k = 0; k < n; ++k) adag[k * n + k] = C(R(1), R(0));  // vacuum

  const R lam = R(cfg.lambda);
  const R root_mu = Ops::sqrt(R(cfg.mu));
  // the pi/2 offset aligns psi with its role in the covariance: psi = pi/2
  // maximizes the photon-number correlation, psi = 0 the anticorrelation
  const R psi_eff = R(cfg.psi) + R(M_PI / 2);
  const C coh(root_mu * Ops::cos(psi_eff), root_mu * Ops::sin(psi_eff));
  switch (cfg.family) {
    case HolometerFamily::kClassical:
      mean_in[2] = C(root_mu, R(0));
      mean_in[3] = C(root_mu, R(0));
      break;
    case HolometerFamily::kSqueezed: {
      // squeezed vacua oriented to squash the quadrature carrying the
      // fringe: <a^2> = -sinh cosh, <a+a> = sinh^2
      const R sh = Ops::sqrt(lam);
      const R ch = Ops::sqrt(R(1) + lam);
      aa[0 * n + 0] = C(-sh * ch, R(0));
      aa[1 * n + 1] = C(-sh * ch, R(0));
      adag[0 * n + 0] = C(R(1) + lam, R(0));
      adag[1 * n + 1] = C(R(1) + lam, R(0));
      mean_in[2] = C(root_mu, R(0));
      mean_in[3] = C(root_mu, R(0));
      break;
    }
    case HolometerFamily::kTwb: {
      const R shch = Ops::sqrt(lam * (R(1) + lam));
      aa[0 * n + 1] = C(shch, R(0));
      aa[1 * n + 0] = C(shch, R(0));
      adag[0 * n + 0] = C(R(1) + lam, R(0));
      adag[1 * n + 1] = C(R(1) + lam, R(0));
      mean_in[2] = coh;
      mean_in[3] = coh;
      break;
    }
  }

  // passive map: c_k = cos(phi_k/2) a_k + sin(phi_k/2) b_k,
  //              d_k = cos(phi_k/2) b_k - sin(phi_k/2) a_k
  const R c1 = Ops::cos(phi1 / R(2)), s1 = Ops::sin(phi1 / R(2));
  const R c2 = Ops::cos(phi2 / R(2)), s2 = Ops::sin(phi2 / R(2));
  // rows: output modes (c1, c2, d1, d2); cols: inputs (a1, a2, b1, b2)
  const R t[4][4] = {{c1, R(0), s1, R(0)},
                     {R(0), c2, R(0), s2},
                     {-s1, R(0), c1, R(0)},
                     {R(0), -s2, R(0), c2}};

  std::vector<C> mean_out(n, C(R(0), R(0)));
  std::vector<C> aa_out(n * n, C(R(0), R(0)));
  std::vector<C> adag_out(n * n, C(R(0), R(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (t[i][k] != R(0)) mean_out[i] += t[i][k] * mean_in[k];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      C vaa(R(0), R(0)), vad(R(0), R(0));
      for (int k = 0; k < n; ++k) {
        if (t[i][k] == R(0)) continue;
        for (int l = 0; l < n; ++l) {
          if (t[j][l] == R(0)) continue;
          vaa += t[i][k] * t[j][l] * aa[k * n + l];
          vad += t[i][k] * t[j][l] * adag[k * n + l];
        }
      }
      aa_out[i * n + j] = vaa;
      adag_out[i * n + j] = vad;
    }
  }

  // detection loss on every output mode
  const R eta = R(cfg.eta);
  const R root_eta = Ops::sqrt(eta);
  for (int i = 0; i < n; ++i) mean_out[i] *= root_eta;
  for (int i = 0; i < n * n; ++i) {
    aa_out[i] *= eta;
    adag_out[i] *= eta;
  }
  for (int i = 0; i < n; ++i) adag_out[i * n + i] += C(R(1) - eta, R(0));

  WickContext<R> ctx;
  ctx.n_modes = n;
  ctx.mean = mean_out;
  ctx.contr.assign(n2 * n2, C(R(0), R(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ctx.contr[(2 * i + 0) * n2 + (2 * j + 0)] = aa_out[i * n + j];
      ctx.contr[(2 * i + 0) * n2 + (2 * j + 1)] = adag_out[i * n + j];
      // <da_i+ da_j> = <da_j da_i+> - delta_ij (commutator), transposed table
      ctx.contr[(2 * i + 1) * n2 + (2 * j + 0)] =
          adag_out[j * n + i] - (i == j ? C(R(1), R(0)) : C(R(0), R(0)));
      ctx.contr[(2 * i + 1) * n2 + (2 * j + 1)] = std::conj(aa_out[i * n + j]);
    }
  }
  return ctx;
}

template <typename R>
OpPoly<R> observable_at(const HolometerConfig& cfg, const WickContext<R>& center_ctx) {
  // centering constants frozen at the working point
  if (cfg.observable == HolometerObservable::kDiffProduct) {
    const auto d1 = OpPoly<R>::number(0) - OpPoly<R>::number(2);
    const auto d2 = OpPoly<R>::number(1) - OpPoly<R>::number(3);
    const auto c1 = OpPoly<R>::constant(expectation(center_ctx, d1));
    const auto c2 = OpPoly<R>::constant(expectation(center_ctx, d2));
    return (d1 - c1) * (d2 - c2);
  }
  const auto p = OpPoly<R>::number(0) - OpPoly<R>::number(1);
  const auto c0 = OpPoly<R>::constant(expectation(center_ctx, p));
  const auto centered_p = p - c0;
  return centered_p * centered_p;
}

template <typename R>
ZeroOrderUncertainty u0_impl(const HolometerConfig& cfg) {
  using Ops = ScalarOps<R>;
  const R p1 = R(cfg.phi10), p2 = R(cfg.phi20);
  const auto center = build_context<R>(cfg, p1, p2);
  const auto obs = observable_at(cfg, center);

  const R var_c = variance(center, obs);
  const R num = Ops::sqrt(R(2) * Ops::abs(var_c));

  // mixed partial of <C(phi1, phi2)> by corner differences with one
  // Richardson refinement (h and h/2)
  auto mean_c = [&](R f1, R f2) {
    const auto ctx = build_context<R>(cfg, f1, f2);
    return expectation(ctx, obs).real();
  };
  auto corner = [&](R h) {
    return (mean_c(p1 + h, p2 + h) - mean_c(p1 + h, p2 - h) - mean_c(p1 - h, p2 + h) +
            mean_c(p1 - h, p2 - h)) /
           (R(4) * h * h);
  };
  const R h(1e-4);
  const R d_h = corner(h), d_h2 = corner(h / R(2));
  const R den = Ops::abs((R(4) * d_h2 - d_h) / R(3));

  ZeroOrderUncertainty out;
  out.numerator = static_cast<double>(num);
  out.denominator = static_cast<double>(den);
  out.value = den > R(0) ? static_cast<double>(num / den)
                         : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

ZeroOrderUncertainty covariance_uncertainty_zero(const HolometerConfig& config) {
  validate(config);
  return u0_impl<__float128>(config);
}

double ratio_r0(const HolometerConfig& config) {
  validate(config);
  const HolometerConfig cl = HolometerConfig::classical(config.mu, config.eta);
  const auto u_f = covariance_uncertainty_zero(config);
  const auto u_cl = covariance_uncertainty_zero(cl);
  if (!(u_cl.value > 0.0) || !std::isfinite(u_cl.value))
    throw NumericError("ratio_r0: classical baseline undefined");
  if (u_f.denominator == 0.0) return std::numeric_limits<double>::infinity();
  return (u_f.numerator / u_cl.numerator) * (u_cl.denominator / u_f.denominator);
}

std::vector<RatioPoint> ratio_curves(HolometerFamily family, RatioSweep vary,
                                     const std::vector<double>& grid,
                                     const HolometerConfig& base) {
  std::vector<RatioPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    HolometerConfig cfg = base;
    cfg.family = family;
    cfg.observable = family == HolometerFamily::kTwb ? HolometerObservable::kDiffSquared
                                                     : HolometerObservable::kDiffProduct;
    switch (vary) {
      case RatioSweep::kEta:
        cfg.eta = x;
        break;
      case RatioSweep::kPhi0:
        cfg.phi10 = cfg.phi20 =
            family == HolometerFamily::kTwb ? x : M_PI / 2 + 0.5 * x;
        break;
      case RatioSweep::kLambda:
        cfg.lambda = x;
        break;
    }
    out.push_back({x, ratio_r0(cfg)});
  }
  return out;
}

double twb_advantage_threshold(const HolometerConfig& base, double lo, double hi) {
  auto f = [&](double eta) {
    HolometerConfig cfg = base;
    cfg.family = HolometerFamily::kTwb;
    cfg.observable = HolometerObservable::kDiffSquared;
    cfg.eta = eta;
    return ratio_r0(cfg) - 1.0;
  };
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw NumericError("twb_advantage_threshold: no sign change");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double nrf_at(double mu, double lambda, double eta, double tau, double psi, int sign) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("nrf_at: tau must lie in (0,1]");
  const double phi = 2.0 * std::acos(std::sqrt(tau));
  HolometerConfig cfg = HolometerConfig::twb(mu, lambda, eta, phi, psi);
  const auto ctx = build_context<double>(cfg, phi, phi);
  const auto d =
      OpPoly<double>::number(0) + OpPoly<double>::number(1) * static_cast<double>(sign);
  const double total = expectation(ctx, OpPoly<double>::number(0)).real() +
                       expectation(ctx, OpPoly<double>::number(1)).real();
  if (total <= 0.0) throw NumericError("nrf_at: zero mean flux");
  return variance(ctx, d) / total;
}

std::vector<NrfPoint> nrf_regimes(double mu, double lambda, double eta,
                                  const std::vector<double>& tau_grid) {
  std::vector<NrfPoint> out;
  out.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    if (!(tau > 0.0 && tau <= 1.0))
      throw ValidationError("nrf_regimes: tau must lie in (0,1]");
    const double phi = 2.0 * std::acos(std::sqrt(tau));
    NrfPoint pt;
    pt.tau = tau;
    pt.kappa = lambda > 0.0 ? mu * (1.0 - tau) / (tau * lambda)
                            : std::numeric_limits<double>::infinity();
    pt.nrf_minus = nrf_at(mu, lambda, eta, tau, M_PI / 2, -1);
    pt.nrf_plus = nrf_at(mu, lambda, eta, tau, 0.0, +1);
    (void)phi;
    out.push_back(pt);
  }
  return out;
}

namespace {

// Gauss-Hermite nodes/weights via the Golub-Welsch tridiagonal.
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(0.5 * i);
    j(i, i - 1) = b;
    j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(order);
  weights.resize(order);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[i] = sqrt_pi * v * v;
  }
}

}  // namespace

double holographic_noise_average(const HolometerConfig& config, const NoiseModel& noise) {
  validate(config);
  if (!(noise.sigma_h >= 0.0)) throw ValidationError("noise: sigma_h must be >= 0");
  if (noise.sigma_h > 0.05)
    throw NumericError("holographic_noise_average: sigma_h too large for the quadrature");
  using Q = __float128;
  const auto center = build_context<Q>(config, Q(config.phi10), Q(config.phi20));
  const auto obs = observable_at(config, center);
  auto mean_c = [&](double f1, double f2) {
    const auto ctx = build_context<Q>(config, Q(f1), Q(f2));
    return static_cast<double>(expectation(ctx, obs).real());
  };
  if (noise.sigma_h == 0.0) return mean_c(config.phi10, config.phi20);

  constexpr int kOrder = 24;
  std::vector<double> x, w;
  gauss_hermite(kOrder, x, w);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  double total = 0.0;
  if (noise.parallel) {
    // perfectly correlated jitter: phi1 = phi2 along the diagonal
    for (int i = 0; i < kOrder; ++i) {
      const double d = std::sqrt(2.0) * noise.sigma_h * x[i];
      total += w[i] * mean_c(config.phi10 + d, config.phi20 + d);
    }
    return total * inv_sqrt_pi;
  }
  for (int i = 0; i < kOrder; ++i) {
    const double d1 = std::sqrt(2.0) * noise.sigma_h * x[i];
    double row = 0.0;
    for (int j = 0; j < kOrder; ++j) {
      const double d2 = std::sqrt(2.0) * noise.sigma_h * x[j];
      row += w[j] * mean_c(config.phi10 + d1, config.phi20 + d2);
    }
    total += w[i] * row;
  }
  return total * inv_sqrt_pi * inv_sqrt_pi;
}

double holographic_marginal_mean(const HolometerConfig& config, const NoiseModel& noise,
                                 int mode) {
  validate(config);
  if (mode < 0 || mode > 3) throw ValidationError("marginal: mode must be 0..3");
  auto mean_n = [&](double f1, double f2) {
    const auto ctx = build_context<double>(config, f1, f2);
    return expectation(ctx, OpPoly<double>::number(mode)).real();
  };
  if (noise.sigma_h == 0.0) return mean_n(config.phi10, config.phi20);
  constexpr int kOrder = 24;
  std::vector<double> x, w;
  gauss_hermite(kOrder, x, w);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  double total = 0.0;
  if (noise.parallel) {
    for (int i = 0; i < kOrder; ++i) {
      const double d = std::sqrt(2.0) * noise.sigma_h * x[i];
      total += w[i] * mean_n(config.phi10 + d, config.phi20 + d);
    }
    return total * inv_sqrt_pi;
  }
  for (int i = 0; i < kOrder; ++i) {
    const double d1 = std::sqrt(2.0) * noise.sigma_h * x[i];
    double row = 0.0;
    for (int j = 0; j < kOrder; ++j) {
      const double d2 = std::sqrt(2.0) * noise.sigma_h * x[j];
      row += w[j] * mean_n(config.phi10 + d1, config.phi20 + d2);
    }
    total += w[i] * row;
  }
  return total * inv_sqrt_pi * inv_sqrt_pi;
}

double recovered_phase_covariance(const HolometerConfig& config, double sigma_h) {
  const double e_par = holographic_noise_average(config, {true, sigma_h});
  const double e_orth = holographic_noise_average(config, {false, sigma_h});
  using Q = __float128;
  const auto center = build_context<Q>(config, Q(config.phi10), Q(config.phi20));
  const auto obs = observable_at(config, center);
  auto mean_c = [&](double f1, double f2) {
    const auto ctx = build_context<Q>(config, Q(f1), Q(f2));
    return static_cast<double>(expectation(ctx, obs).real());
  };
  // signed mixed partial: the estimator divides by the curvature with sign
  const double h = 1e-4;
  const double signed_den =
      (mean_c(config.phi10 + h, config.phi20 + h) -
       mean_c(config.phi10 + h, config.phi20 - h) -
       mean_c(config.phi10 - h, config.phi20 + h) +
       mean_c(config.phi10 - h, config.phi20 - h)) /
      (4.0 * h * h);
  if (signed_den == 0.0)
    throw NumericError("recovered_phase_covariance: vanishing curvature");
  return (e_par - e_orth) / signed_den;
}

}  // namespace qmetro
