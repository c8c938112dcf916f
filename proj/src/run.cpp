#include "qmetro/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "qmetro/errors.hpp"
#include "qmetro/rng.hpp"
#include "qmetro/estimation.hpp"
#include "qmetro/holometer.hpp"
#include "qmetro/illumination.hpp"
#include "qmetro/interferometry.hpp"
#include "qmetro/moments.hpp"

namespace qmetro {

namespace {

// Typed access to the key=value overrides; every known key records its
// effective value for the provenance echo, unknown keys are rejected.
class ParamReader {
 public:
  explicit ParamReader(const RunSpec& spec) : spec_(spec) {}

  double number(const std::string& key, double fallback) {
    return parse_number(take(key, format(fallback)));
  }
  double required_number(const std::string& key) {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end())
      throw ValidationError("missing required parameter '" + key + "'");
    return parse_number(take(key, it->second));
  }
  long integer(const std::string& key, long fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw ValidationError("parameter '" + key + "' must be an integer");
    return static_cast<long>(v);
  }
  std::uint64_t required_seed() {
    const double v = required_number("seed");
    if (v < 0 || v != std::floor(v)) throw ValidationError("seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  std::string choice(const std::string& key, const std::string& fallback,
                     const std::set<std::string>& allowed) {
    const std::string v = take(key, fallback);
    if (!allowed.count(v)) {
      std::string msg = "parameter '" + key + "' must be one of {";
      for (const auto& a : allowed) msg += a + ",";
      msg.back() = '}';
      throw ValidationError(msg);
    }
    return v;
  }
  std::vector<double> number_list(const std::string& key, const std::string& fallback) {
    const std::string v = take(key, fallback);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(parse_number(item));
    if (out.empty()) throw ValidationError("parameter '" + key + "' is an empty list");
    return out;
  }
  int threads() {
    long t = integer("threads", default_threads());
    if (t < 1 || t > 256) throw ValidationError("threads must lie in [1,256]");
    return static_cast<int>(t);
  }

  void finish(CurveData* curve) {
    for (const auto& [k, v] : spec_.params)
      if (!consumed_.count(k)) throw ValidationError("unknown parameter '" + k + "'");
    for (const auto& [k, v] : effective_) curve->params.push_back({k, v});
    std::sort(curve->params.begin(), curve->params.end());
  }

  static int default_threads() {
    if (const char* env = std::getenv("QMETRO_THREADS")) {
      const long t = std::strtol(env, nullptr, 10);
      if (t >= 1 && t <= 256) return static_cast<int>(t);
    }
    return 1;
  }

 private:
  std::string take(const std::string& key, const std::string& fallback) {
    consumed_.insert(key);
    auto it = spec_.params.find(key);
    const std::string v = it == spec_.params.end() ? fallback : it->second;
    effective_[key] = v;
    return v;
  }
  static double parse_number(const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw ValidationError("trailing characters in number '" + s + "'");
      return v;
    } catch (const std::invalid_argument&) {
      throw ValidationError("cannot parse number '" + s + "'");
    } catch (const std::out_of_range&) {
      throw ValidationError("number out of range '" + s + "'");
    }
  }
  static std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  const RunSpec& spec_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> effective_;
};

std::vector<double> linspace(double lo, double hi, long n) {
  if (n < 2 || !(hi > lo)) throw ValidationError("grid needs hi > lo and points >= 2");
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<double> logspace(double lo, double hi, long n) {
  if (!(lo > 0.0)) throw ValidationError("log grid needs lo > 0");
  auto g = linspace(std::log10(lo), std::log10(hi), n);
  for (auto& v : g) v = std::pow(10.0, v);
  return g;
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  if (threads <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int k = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

InterferometerConfig mz_config(double alpha2, double lambda, double eta, bool single_port) {
  InterferometerConfig c;
  c.input_a = PortInput::coherent(std::sqrt(alpha2));
  c.input_b = lambda > 0.0
                  ? PortInput::squeezed_vacuum(std::asinh(std::sqrt(lambda)), M_PI)
                  : PortInput::vacuum();
  c.eta = eta;
  c.detection = single_port ? DetectionStage::kSinglePortD : DetectionStage::kBalancedBSDiff;
  c.working_point = single_port ? WorkingPoint::kDarkPort : WorkingPoint::kHalfPi;
  return c;
}

// ---- subcommands ----------------------------------------------------------

CurveData run_fringes(ParamReader& p) {
  const double alpha2 = p.number("alpha2", 1e6);
  const double lambda = p.number("lambda", 0.0);
  const double eta = p.number("eta", 1.0);
  const bool single_port = p.choice("observable", "dminus", {"dminus", "nd"}) == "nd";
  const double lo = p.number("phi_min", 0.0);
  const double hi = p.number("phi_max", M_PI);
  const long points = p.integer("points", 121);
  const long shots = p.integer("shots", 1000);
  const std::uint64_t seed = p.required_seed();

  const auto cfg = mz_config(alpha2, lambda, eta, single_port);
  const auto grid = linspace(lo, hi, points);
  const auto samples = simulate_fringes(cfg, grid, static_cast<int>(shots), seed);

  CurveData curve;
  curve.x = {"phi", "rad"};
  curve.y = {single_port ? "N_d_sample_mean" : "D_minus_sample_mean", "photons"};
  curve.yerr = {"sample_std", "photons"};
  curve.has_yerr = true;
  curve.seeded = true;
  curve.seed = seed;
  for (const auto& s : samples) curve.push(s.phi, s.mean, s.sample_std);
  return curve;
}

CurveData run_ratio(ParamReader& p) {
  const double alpha2 = p.number("alpha2", 1e6);
  const double lambda = p.number("lambda", 4.0);
  const double eta = p.number("eta", 1.0);
  const bool single_port = p.choice("observable", "dminus", {"dminus", "nd"}) == "nd";
  const double lo = p.number("phi_min", 0.02);
  const double hi = p.number("phi_max", M_PI - 0.02);
  const long points = p.integer("points", 157);

  const auto grid = linspace(lo, hi, points);
  const auto sq = mz_config(alpha2, lambda, eta, single_port);
  const auto cl = mz_config(alpha2, 0.0, eta, single_port);
  const auto r = sensitivity_ratio(sq, cl, grid);

  CurveData curve;
  curve.x = {"phi", "rad"};
  curve.y = {"R_sq_over_cl", ""};
  for (long i = 0; i < points; ++i) curve.push(grid[i], r[i]);
  return curve;
}

double qfi_engine(double n_tot, double beta) {
  const double lam = 0.5 * beta * n_tot;          // squeeze photons per mode
  const double a2 = 0.5 * (1.0 - beta) * n_tot;   // coherent photons per mode
  const double r = std::asinh(std::sqrt(lam));
  auto probe = GaussianState::squeezed(std::sqrt(a2), r, 0.0)
                   .tensor(GaussianState::squeezed(std::sqrt(a2), r, 0.0));
  probe = apply(beam_splitter(M_PI / 4, 0.0), probe, {0, 1});
  return qfi_pure_unitary(probe, {{0}, {}});
}

double qfi_printed(double n_tot, double beta) {
  const double nb = n_tot * beta;
  return 2.0 * n_tot *
         (2.0 * n_tot * beta * (2.0 - beta) +
          2.0 * (1.0 - beta) * std::sqrt(nb * (2.0 + nb)));
}

CurveData run_qfi_bounds(ParamReader& p) {
  const double lo = p.number("ntot_min", 10.0);
  const double hi = p.number("ntot_max", 1e4);
  const long points = p.integer("points", 25);
  const int threads = p.threads();

  const auto grid = logspace(lo, hi, points);
  std::vector<double> dphi(points), beta_opt(points);
  parallel_for(points, threads, [&](long i) {
    auto [b, h] = maximize_scalar([&](double beta) { return qfi_engine(grid[i], beta); },
                                  1e-4, 1.0 - 1e-4, 1e-7);
    beta_opt[i] = b;
    dphi[i] = 1.0 / std::sqrt(h);
  });

  CurveData curve;
  curve.x = {"N_tot", "photons"};
  curve.y = {"delta_phi", "rad"};
  curve.threads = threads;
  for (long i = 0; i < points; ++i) curve.push(grid[i], dphi[i]);

  const auto fit = fit_scaling(grid, dphi);
  std::ostringstream note;
  note.precision(6);
  note << "log-log slope of delta_phi vs N_tot: " << fit.exponent;
  curve.notes.push_back(note.str());
  {
    // compare the generator-variance optimum with the closed-form display
    const double n_ref = grid.back();
    auto [b_eng, h_eng] = maximize_scalar(
        [&](double b) { return qfi_engine(n_ref, b); }, 1e-4, 1.0 - 1e-4, 1e-7);
    auto [b_prn, h_prn] = maximize_scalar(
        [&](double b) { return qfi_printed(n_ref, b); }, 1e-4, 1.0 - 1e-4, 1e-7);
    std::ostringstream d;
    d.precision(6);
    d << "at N_tot=" << n_ref << ": generator-variance route gives beta_max=" << b_eng
      << ", H/N^2=" << h_eng / (n_ref * n_ref) << " (-> 8/3, beta -> 2/3); the closed-form"
      << " display maximizes at beta=" << b_prn << ", H/N^2=" << h_prn / (n_ref * n_ref)
      << " and disagrees with its own quoted limits";
    curve.notes.push_back(d.str());
    std::ostringstream b;
    b.precision(6);
    b << "optimal squeeze fraction at largest N_tot: " << beta_opt[points - 1];
    curve.notes.push_back(b.str());
  }
  return curve;
}

CurveData run_config_opt(ParamReader& p) {
  const std::string family_name =
      p.choice("family", "passive-passive",
               {"passive-passive", "passive-active", "active-passive", "active-active"});
  const double eta = p.number("eta", 1.0);
  const double lo = p.number("ntot_min", 10.0);
  const double hi = p.number("ntot_max", 1e4);
  const long points = p.integer("points", 13);
  const double rdet = p.number("rdet_max", 6.0);
  const int threads = p.threads();

  ConfigFamily family = ConfigFamily::kPassivePassive;
  if (family_name == "passive-active") family = ConfigFamily::kPassiveActive;
  if (family_name == "active-passive") family = ConfigFamily::kActivePassive;
  if (family_name == "active-active") family = ConfigFamily::kActiveActive;

  const auto grid = logspace(lo, hi, points);
  std::vector<double> s_min(points);
  std::vector<std::string> structures(points);
  parallel_for(points, threads, [&](long i) {
    const auto opt = optimize_configuration(family, grid[i], eta, rdet);
    s_min[i] = opt.sensitivity;
    structures[i] = opt.input_structure;
  });

  CurveData curve;
  curve.x = {"N_tot", "photons"};
  curve.y = {"S_min", "rad"};
  curve.threads = threads;
  for (long i = 0; i < points; ++i) curve.push(grid[i], s_min[i]);
  const auto fit = fit_scaling(grid, s_min);
  std::ostringstream note;
  note.precision(6);
  note << "log-log slope of S_min vs N_tot: " << fit.exponent;
  curve.notes.push_back(note.str());
  curve.notes.push_back("optimal inputs at largest N_tot: " + structures[points - 1]);
  return curve;
}

CurveData run_illumination(ParamReader& p) {
  IlluminationConfig base;
  base.source = p.choice("source", "twb", {"twb", "classical"}) == "twb"
                    ? IlluminationSource::kTwb
                    : IlluminationSource::kSplitThermal;
  base.mu_per_mode = p.number("mu", 0.075);
  base.modes_per_pixel = static_cast<int>(p.integer("modes_per_pixel", 1000));
  base.background_modes = static_cast<int>(p.integer("mb", 1300));
  base.eta = p.number("eta", 0.8);
  base.pairs = static_cast<int>(p.integer("pairs", 10000));
  const long trials = p.integer("trials", 200);
  const auto nb_grid = p.number_list("nb_grid", "1,3,10,30,100");
  const std::string kind = p.choice("curve", "perr", {"perr", "covariance"});
  const bool hypothesis_in =
      p.choice("hypothesis", "in", {"in", "out"}) == "in";
  const std::uint64_t seed = p.required_seed();
  const int threads = p.threads();

  CurveData curve;
  curve.x = {"N_b", "photons"};
  curve.threads = threads;
  curve.seeded = true;
  curve.seed = seed;
  const long n = static_cast<long>(nb_grid.size());
  std::vector<double> ys(n), errs(n);
  if (kind == "perr") {
    curve.y = {"P_err", ""};
    parallel_for(n, threads, [&](long i) {
      IlluminationConfig cfg = base;
      cfg.n_background = nb_grid[i];
      cfg.seed = Rng::splitmix64(seed ^ (0xabcdULL + i));
      ys[i] = error_probability(cfg, static_cast<int>(trials)).p_err;
    });
    for (long i = 0; i < n; ++i) curve.push(nb_grid[i], ys[i]);
  } else {
    curve.y = {"covariance", "photons^2"};
    curve.yerr = {"covariance_std", "photons^2"};
    curve.has_yerr = true;
    parallel_for(n, threads, [&](long i) {
      IlluminationConfig cfg = base;
      cfg.n_background = nb_grid[i];
      cfg.object_present = hypothesis_in;
      cfg.seed = Rng::splitmix64(seed ^ (0xabcdULL + i));
      const auto res = error_probability(cfg, static_cast<int>(trials));
      ys[i] = hypothesis_in ? res.cov_mean_in : res.cov_mean_out;
      errs[i] = hypothesis_in ? res.cov_std_in : res.cov_std_out;
    });
    for (long i = 0; i < n; ++i) curve.push(nb_grid[i], ys[i], errs[i]);
  }
  return curve;
}

CurveData run_holometer_ratio(ParamReader& p) {
  const std::string family_name = p.choice("family", "twb", {"twb", "squeezed"});
  const std::string vary_name = p.choice("vary", "eta", {"eta", "phi0", "lambda"});
  const HolometerFamily family =
      family_name == "twb" ? HolometerFamily::kTwb : HolometerFamily::kSqueezed;
  const double mu = p.number("mu", 1e8);
  const double lambda = p.number("lambda", 0.5);
  const double eta = p.number("eta", 0.95);
  const double psi = p.number("psi", M_PI / 2);

  HolometerConfig base = family == HolometerFamily::kTwb
                             ? HolometerConfig::twb(mu, lambda, eta, 0.0, psi)
                             : HolometerConfig::squeezed(mu, lambda, eta);
  base.phi10 = base.phi20 = p.number("phi0", base.phi10);

  RatioSweep vary = RatioSweep::kEta;
  std::vector<double> grid;
  if (vary_name == "eta") {
    grid = linspace(p.number("x_min", 0.4), p.number("x_max", 0.999),
                    p.integer("points", 41));
  } else if (vary_name == "phi0") {
    vary = RatioSweep::kPhi0;
    grid = logspace(p.number("x_min", 1e-5), p.number("x_max", 1e-1),
                    p.integer("points", 33));
  } else {
    vary = RatioSweep::kLambda;
    grid = logspace(p.number("x_min", 0.01), p.number("x_max", 100.0),
                    p.integer("points", 25));
  }
  const auto pts = ratio_curves(family, vary, grid, base);

  CurveData curve;
  curve.x = {vary_name, vary_name == "eta" ? "" : (vary_name == "phi0" ? "rad" : "photons")};
  curve.y = {"R0", ""};
  for (const auto& pt : pts) curve.push(pt.x, pt.r0);
  if (family == HolometerFamily::kTwb && vary == RatioSweep::kEta) {
    try {
      std::ostringstream note;
      note.precision(6);
      note << "R0 = 1 crossing at eta = " << twb_advantage_threshold(base);
      curve.notes.push_back(note.str());
    } catch (const NumericError&) {
      curve.notes.push_back("R0 = 1 crossing not bracketed on (0.05, 0.999)");
    }
  }
  return curve;
}

CurveData run_nrf(ParamReader& p) {
  const double mu = p.number("mu", 100.0);
  const double lambda = p.number("lambda", 2.0);
  const double eta = p.number("eta", 1.0);
  const bool minus = p.choice("sign", "minus", {"minus", "plus"}) == "minus";
  const auto grid = linspace(p.number("tau_min", 0.5), p.number("tau_max", 1.0),
                             p.integer("points", 101));
  const auto pts = nrf_regimes(mu, lambda, eta, grid);

  CurveData curve;
  curve.x = {"tau", ""};
  curve.y = {minus ? "NRF_minus" : "NRF_plus", ""};
  for (const auto& pt : pts) curve.push(pt.tau, minus ? pt.nrf_minus : pt.nrf_plus);
  // regime boundary kappa = mu(1-tau)/(tau lambda) = 1
  const double tau_star = mu / (mu + lambda);
  if (tau_star > grid.front() && tau_star < grid.back()) {
    std::ostringstream note;
    note.precision(6);
    note << "kappa = 1 at tau = " << tau_star;
    curve.notes.push_back(note.str());
  }
  return curve;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "fringes", "ratio", "qfi-bounds", "config-opt",
      "illumination", "holometer-ratio", "nrf"};
  return names;
}

CurveData run_subcommand(const RunSpec& spec) {
  ParamReader p(spec);
  CurveData curve;
  if (spec.subcommand == "fringes") curve = run_fringes(p);
  else if (spec.subcommand == "ratio") curve = run_ratio(p);
  else if (spec.subcommand == "qfi-bounds") curve = run_qfi_bounds(p);
  else if (spec.subcommand == "config-opt") curve = run_config_opt(p);
  else if (spec.subcommand == "illumination") curve = run_illumination(p);
  else if (spec.subcommand == "holometer-ratio") curve = run_holometer_ratio(p);
  else if (spec.subcommand == "nrf") curve = run_nrf(p);
  else throw ValidationError("unknown subcommand '" + spec.subcommand + "'");
  curve.subcommand = spec.subcommand;
  for (const auto& entry : figure_table()) {
    if (entry.subcommand == spec.subcommand) {
      curve.figure = entry.figure;
      break;
    }
  }
  p.finish(&curve);
  curve.check();
  return curve;
}

void write_outputs(const CurveData& curve, const std::string& output_base) {
  write_csv(curve, output_base + ".csv");
  write_meta_json(curve, output_base + ".meta.json");
}

const std::vector<FigureEntry>& figure_table() {
  static const std::vector<FigureEntry> table = {
      {"fringes", "fig. 4", "interference fringes, coherent + vacuum, Monte Carlo"},
      {"fringes", "fig. 5", "fringes with a squeezed-vacuum port (lambda > 0)"},
      {"ratio", "fig. 5", "sensitivity ratio squeezed/classical vs phase"},
      {"qfi-bounds", "fig. 7", "optimal squeeze fraction and Heisenberg-scaling bound"},
      {"config-opt", "fig. 8", "passive interferometer, passive detection optimum"},
      {"config-opt", "fig. 9", "passive interferometer, OPA detection optimum"},
      {"config-opt", "fig. 10", "OPA interferometer, OPA detection optimum"},
      {"illumination", "fig. 11", "covariance vs background (curve=covariance)"},
      {"illumination", "fig. 12", "target-detection error probability vs background"},
      {"nrf", "fig. 15", "noise reduction factors vs interferometer transmission"},
      {"holometer-ratio", "fig. 16", "R0 vs efficiency (vary=eta)"},
      {"holometer-ratio", "fig. 17", "twin-beam R0 vs central phase (family=twb, vary=phi0)"},
      {"holometer-ratio", "fig. 18", "squeezed R0 vs central phase (family=squeezed, vary=phi0)"},
      {"holometer-ratio", "fig. 19", "R0 vs efficiency at several lambda (vary=eta)"},
      {"holometer-ratio", "fig. 20", "twin-beam vs squeezed threshold (vary=lambda)"},
  };
  return table;
}

}  // namespace qmetro
