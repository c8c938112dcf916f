#include "qmetro/interferometry.hpp"

#include <cmath>
#include <limits>

#include "qmetro/errors.hpp"
#include "qmetro/moments.hpp"
#include "qmetro/rng.hpp"

namespace qmetro {

SymplecticOp mz_effective_bs(double phi) { return beam_splitter(0.5 * phi, 0.0); }

PortInput PortInput::coherent(double alpha, double phase) {
  PortInput p;
  p.kind = Kind::kCoherent;
  p.amplitude = alpha;
  p.alpha_phase = phase;
  return p;
}

PortInput PortInput::squeezed_vacuum(double r, double psi) {
  PortInput p;
  p.kind = Kind::kSqueezed;
  p.squeeze_r = r;
  p.squeeze_psi = psi;
  return p;
}

PortInput PortInput::squeezed_coherent(double alpha, double r, double psi) {
  PortInput p;
  p.kind = Kind::kSqueezedCoherent;
  p.amplitude = alpha;
  p.squeeze_r = r;
  p.squeeze_psi = psi;
  return p;
}

GaussianState PortInput::make() const {
  switch (kind) {
    case Kind::kVacuum:
      return GaussianState::vacuum(1);
    case Kind::kCoherent:
      return GaussianState::coherent(std::polar(amplitude, alpha_phase));
    case Kind::kSqueezed:
      return GaussianState::squeezed(0.0, squeeze_r, squeeze_psi);
    case Kind::kSqueezedCoherent:
      return GaussianState::squeezed(std::polar(amplitude, alpha_phase), squeeze_r,
                                     squeeze_psi);
    case Kind::kThermal:
      return GaussianState::thermal(thermal_n);
  }
  throw ValidationError("PortInput: unknown kind");
}

double PortInput::mean_photons() const { return make().mean_photons(0); }

namespace {

GaussianState propagate(const InterferometerConfig& cfg, double phi) {
  GaussianState st = cfg.input_a.make().tensor(cfg.input_b.make());
  if (cfg.first_stage == FirstStage::kBalancedBS &&
      cfg.detection != DetectionStage::kOpaSum) {
    // whole passive interferometer collapses to the tau(phi) beam splitter
    st = apply(mz_effective_bs(phi), st, {0, 1});
  } else {
    if (cfg.first_stage == FirstStage::kBalancedBS) {
      st = apply(beam_splitter(M_PI / 4, 0.0), st, {0, 1});
    } else {
      st = apply(two_mode_squeezer(cfg.first_opa_r, 0.0), st, {0, 1});
    }
    st = apply(phase_shift(phi), st, {0});
    if (cfg.detection == DetectionStage::kBalancedBSDiff) {
      st = apply(beam_splitter(M_PI / 4, 0.0), st, {0, 1});
    } else if (cfg.detection == DetectionStage::kOpaSum) {
      st = apply(two_mode_squeezer(cfg.det_opa_r, M_PI), st, {0, 1});
    }
  }
  if (cfg.eta < 1.0) st = apply_loss(st, cfg.eta, {0, 1});
  return st;
}

OpPoly<double> observable_poly(const InterferometerConfig& cfg) {
  switch (cfg.detection) {
    case DetectionStage::kBalancedBSDiff:
      return OpPoly<double>::number(0) - OpPoly<double>::number(1);
    case DetectionStage::kOpaSum:
      return OpPoly<double>::number(0) + OpPoly<double>::number(1);
    case DetectionStage::kSinglePortD:
      return OpPoly<double>::number(1);
  }
  throw ValidationError("InterferometerConfig: unknown detection stage");
}

}  // namespace

FringePoint fringe_observable(const InterferometerConfig& config, double phi) {
  const GaussianState st = propagate(config, phi);
  const auto ctx = wick_context(st);
  const auto obs = observable_poly(config);
  FringePoint out;
  out.mean = expectation(ctx, obs).real();
  out.variance = variance(ctx, obs);
  return out;
}

OutcomeModel fringe_model(const InterferometerConfig& config) {
  return OutcomeModel::analytic_gaussian(
      [config](double phi) { return fringe_observable(config, phi).mean; },
      [config](double phi) {
        return std::sqrt(std::max(0.0, fringe_observable(config, phi).variance));
      });
}

double config_sensitivity(const InterferometerConfig& config, double phi) {
  return sensitivity(fringe_model(config), phi);
}

std::vector<FringeSample> simulate_fringes(const InterferometerConfig& config,
                                           const std::vector<double>& phi_grid,
                                           int shots, std::uint64_t seed) {
  if (shots < 1) throw ValidationError("simulate_fringes: shots must be >= 1");
  std::vector<FringeSample> out(phi_grid.size());
  for (size_t i = 0; i < phi_grid.size(); ++i) {
    const auto pt = fringe_observable(config, phi_grid[i]);
    const double sd = std::sqrt(std::max(0.0, pt.variance));
    Rng rng = Rng::substream(seed, i);
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < shots; ++s) {
      const double x = pt.mean + sd * rng.normal();
      sum += x;
      sum2 += x * x;
    }
    const double m = sum / shots;
    out[i].phi = phi_grid[i];
    out[i].mean = m;
    out[i].sample_std = shots > 1 ? std::sqrt(std::max(0.0, sum2 / shots - m * m)) : 0.0;
  }
  return out;
}

std::vector<double> sensitivity_ratio(const InterferometerConfig& config_sq,
                                      const InterferometerConfig& config_cl,
                                      const std::vector<double>& phi_grid) {
  const auto model_sq = fringe_model(config_sq);
  const auto model_cl = fringe_model(config_cl);
  std::vector<double> out(phi_grid.size());
  for (size_t i = 0; i < phi_grid.size(); ++i)
    out[i] = sensitivity(model_sq, phi_grid[i]) / sensitivity(model_cl, phi_grid[i]);
  return out;
}

namespace {

// Minimum of S(phi) over the working range, robust to dark fringes.
double min_sensitivity_over_phi(const InterferometerConfig& cfg, double lo, double hi,
                                double* phi_out) {
  const auto model = fringe_model(cfg);
  auto safe_s = [&](double phi) {
    try {
      const double s = sensitivity(model, phi);
      return std::isfinite(s) ? s : 1e30;
    } catch (const NumericError&) {
      return 1e30;
    }
  };
  auto [phi, s] = minimize_scalar(safe_s, lo, hi, 1e-7);
  if (phi_out) *phi_out = phi;
  return s;
}

struct Candidate {
  InterferometerConfig cfg;
  std::string structure;
};

Optimum best_over_candidates(ConfigFamily family, double n_tot, double eta,
                             double det_opa_r_max) {
  Optimum best;
  best.sensitivity = std::numeric_limits<double>::infinity();

  auto consider = [&](const Candidate& cand, double lo, double hi) {
    double phi = 0.0;
    const double s = min_sensitivity_over_phi(cand.cfg, lo, hi, &phi);
    if (s < best.sensitivity) {
      best.sensitivity = s;
      best.phi = phi;
      best.config = cand.cfg;
      best.input_structure = cand.structure;
    }
  };

  switch (family) {
    case ConfigFamily::kPassivePassive: {
      // (a) two squeezed vacua with an energy split
      auto sq_pair = [&](double lam_b) {
        Candidate c;
        c.cfg.detection = DetectionStage::kBalancedBSDiff;
        c.cfg.eta = eta;
        c.cfg.input_a =
            PortInput::squeezed_vacuum(std::asinh(std::sqrt(n_tot - lam_b)), 0.0);
        c.cfg.input_b = PortInput::squeezed_vacuum(std::asinh(std::sqrt(lam_b)), M_PI);
        c.structure = "two squeezed vacua";
        return c;
      };
      // (b) coherent + squeezed vacuum; the optimal squeeze energy sits far
      // below n_tot (~sqrt(n_tot)), so the sweep is logarithmic in lambda
      auto caves = [&](double lam) {
        Candidate c;
        c.cfg.detection = DetectionStage::kBalancedBSDiff;
        c.cfg.eta = eta;
        c.cfg.input_a = PortInput::coherent(std::sqrt(n_tot - lam));
        c.cfg.input_b = PortInput::squeezed_vacuum(std::asinh(std::sqrt(lam)), M_PI);
        c.structure = "coherent + squeezed vacuum";
        return c;
      };
      const double lam_lo = std::min(0.05, 0.2 * n_tot);
      const double lam_hi = 0.9 * n_tot;
      for (int gi = 0; gi <= 28; ++gi) {
        const double lam =
            lam_lo * std::pow(lam_hi / lam_lo, static_cast<double>(gi) / 28.0);
        consider(sq_pair(lam), 0.05, M_PI - 0.05);
        consider(caves(lam), 0.05, M_PI - 0.05);
      }
      break;
    }
    case ConfigFamily::kPassiveActive: {
      const double rdet = det_opa_r_max;
      auto sq_coh = [&](double x, double psia, double chi) {
        Candidate c;
        c.cfg.detection = DetectionStage::kOpaSum;
        c.cfg.det_opa_r = rdet;
        c.cfg.eta = eta;
        const double r = std::asinh(std::sqrt(x * n_tot));
        c.cfg.input_a = PortInput::squeezed_coherent(std::sqrt((1.0 - x) * n_tot), r, psia);
        c.cfg.input_a.alpha_phase = chi;
        c.cfg.input_b = PortInput::vacuum();
        c.structure = "squeezed coherent + vacuum";
        return c;
      };
      // coarse sweep over split and the two orientation angles
      double bx = 0.25, bpsia = M_PI / 2, bchi = 0.0;
      double bval = std::numeric_limits<double>::infinity();
      for (int xi = 1; xi <= 11; ++xi) {
        const double x = 0.05 * xi;
        for (int pa = 0; pa < 8; ++pa) {
          const double psia = 2.0 * M_PI * pa / 8.0;
          for (int ci = 0; ci < 8; ++ci) {
            const double chi = M_PI * ci / 8.0;
            const double s =
                min_sensitivity_over_phi(sq_coh(x, psia, chi).cfg, 0.3, M_PI - 0.3, nullptr);
            if (s < bval) {
              bval = s;
              bx = x;
              bpsia = psia;
              bchi = chi;
            }
          }
        }
      }
      // coordinate refinement
      double wx = 0.05, wa = 0.5, wc = 0.3;
      for (int round = 0; round < 3; ++round) {
        auto eval = [&](double x, double a, double cch) {
          if (x < 1e-3 || x > 0.999) return 1e30;
          return min_sensitivity_over_phi(sq_coh(x, a, cch).cfg, 0.3, M_PI - 0.3, nullptr);
        };
        bx = minimize_scalar([&](double x) { return eval(x, bpsia, bchi); },
                             std::max(1e-3, bx - wx), std::min(0.999, bx + wx), 1e-5)
                 .first;
        bpsia = minimize_scalar([&](double a) { return eval(bx, a, bchi); }, bpsia - wa,
                                bpsia + wa, 1e-5)
                    .first;
        bchi = minimize_scalar([&](double cch) { return eval(bx, bpsia, cch); }, bchi - wc,
                               bchi + wc, 1e-5)
                   .first;
        wx *= 0.4;
        wa *= 0.4;
        wc *= 0.4;
      }
      consider(sq_coh(bx, bpsia, bchi), 0.3, M_PI - 0.3);
      // low-energy alternative: two squeezed vacua
      auto sq_pair = [&](double x) {
        Candidate c;
        c.cfg.detection = DetectionStage::kOpaSum;
        c.cfg.det_opa_r = rdet;
        c.cfg.eta = eta;
        c.cfg.input_a = PortInput::squeezed_vacuum(std::asinh(std::sqrt(x * n_tot)), 0.0);
        c.cfg.input_b =
            PortInput::squeezed_vacuum(std::asinh(std::sqrt((1.0 - x) * n_tot)), M_PI);
        c.structure = "two squeezed vacua";
        return c;
      };
      for (int gi = 1; gi < 12; ++gi) consider(sq_pair(gi / 12.0), 0.05, M_PI - 0.05);
      break;
    }
    case ConfigFamily::kActivePassive:
    case ConfigFamily::kActiveActive: {
      const bool active_det = (family == ConfigFamily::kActiveActive);
      // beta of N_tot goes into the first OPA, the rest into equal coherent
      // seeds: N_tot = (2a^2+1) cosh(2 r1) + 2a^2 sinh(2 r1) - 1.
      auto make = [&](double beta, double rdet) {
        Candidate c;
        c.cfg.first_stage = FirstStage::kOpa;
        c.cfg.detection =
            active_det ? DetectionStage::kOpaSum : DetectionStage::kBalancedBSDiff;
        c.cfg.det_opa_r = rdet;
        c.cfg.eta = eta;
        const double r1 = std::asinh(std::sqrt(0.5 * beta * n_tot));
        c.cfg.first_opa_r = r1;
        const double seed_budget = n_tot - (std::cosh(2.0 * r1) - 1.0);
        const double a2 = std::max(
            0.0, seed_budget / (2.0 * (std::cosh(2 * r1) + std::sinh(2 * r1))));
        c.cfg.input_a = PortInput::coherent(std::sqrt(a2));
        c.cfg.input_b = PortInput::coherent(std::sqrt(a2));
        c.structure = a2 < 1e-9 * n_tot ? "vacuum seeds" : "two coherent seeds";
        return c;
      };
      for (int gi = 0; gi <= 20; ++gi) {
        const double beta = 0.05 + 0.95 * gi / 20.0;
        if (active_det) {
          consider(make(beta, det_opa_r_max), 1e-4, M_PI / 2);
        } else {
          consider(make(beta, 0.0), 1e-4, M_PI - 0.05);
        }
      }
      break;
    }
  }
  if (!std::isfinite(best.sensitivity))
    throw NumericError("optimize_configuration: no finite optimum found");
  return best;
}

}  // namespace

Optimum optimize_configuration(ConfigFamily family, double n_tot, double eta,
                               double det_opa_r_max) {
  if (!(n_tot > 0.0)) throw ValidationError("optimize_configuration: N_tot must be > 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw ValidationError("optimize_configuration: eta must lie in (0,1]");
  return best_over_candidates(family, n_tot, eta, det_opa_r_max);
}

}  // namespace qmetro
