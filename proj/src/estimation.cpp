#include "qmetro/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmetro/errors.hpp"
#include "qmetro/moments.hpp"

namespace qmetro {

OutcomeModel OutcomeModel::analytic_gaussian(std::function<double(double)> mean,
                                             std::function<double(double)> stddev) {
  OutcomeModel m;
  m.gaussian_ = true;
  m.mean_ = std::move(mean);
  m.stddev_ = std::move(stddev);
  return m;
}

OutcomeModel OutcomeModel::discrete(std::function<std::vector<double>(double)> table) {
  OutcomeModel m;
  m.gaussian_ = false;
  m.table_ = std::move(table);
  return m;
}

std::vector<double> OutcomeModel::table(double phi) const {
  std::vector<double> p = table_(phi);
  double total = 0.0;
  for (double v : p) {
    if (v < -1e-12) throw NumericError("OutcomeModel: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw NumericError("OutcomeModel: table not normalized");
  return p;
}

double differentiate(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

double fisher_information(const OutcomeModel& model, double phi) {
  if (model.is_gaussian()) {
    const double s = model.stddev(phi);
    if (!(s > 0.0)) throw NumericError("fisher_information: s(phi) must be positive");
    const double dm = differentiate([&](double p) { return model.mean(p); }, phi);
    const double ds = differentiate([&](double p) { return model.stddev(p); }, phi);
    return (dm * dm) / (s * s) + 2.0 * (ds * ds) / (s * s);
  }
  const double h = 1e-4;
  const std::vector<double> p0 = model.table(phi);
  const std::vector<double> pp = model.table(phi + h);
  const std::vector<double> pm = model.table(phi - h);
  double fi = 0.0;
  bool excluded = false;
  for (size_t k = 0; k < p0.size(); ++k) {
    if (p0[k] < 1e-12) {
      excluded = true;  // vanishing-density outcome skipped
      continue;
    }
    const double dp = (pp[k] - pm[k]) / (2.0 * h);
    fi += dp * dp / p0[k];
  }
  (void)excluded;
  return fi;
}

double qfi_pure_unitary(const GaussianState& probe, const GeneratorSpec& gen) {
  const double det = probe.cov().determinant();
  if (std::abs(det - 1.0) > 1e-6 * std::max(1.0, std::abs(det)))
    throw ValidationError("qfi_pure_unitary: probe is not pure (det cov != 1)");
  const auto ctx = wick_context(probe);
  OpPoly<double> g = OpPoly<double>::constant(0.0);
  for (size_t i = 0; i < gen.modes.size(); ++i) {
    const double w = gen.weights.empty() ? 1.0 : gen.weights[i];
    g += OpPoly<double>::number(gen.modes[i]) * w;
  }
  return 4.0 * variance(ctx, g);
}

double sensitivity(const OutcomeModel& model, double phi) {
  if (!model.is_gaussian())
    throw ValidationError("sensitivity: analytic Gaussian model required");
  const double s = model.stddev(phi);
  const double dm = differentiate([&](double p) { return model.mean(p); }, phi);
  const double scale = std::max({1.0, std::abs(model.mean(phi)), s});
  if (std::abs(dm) < 1e-14 * scale) {
    if (std::abs(s) < 1e-12 * scale) {
      // dark fringe: var and slope vanish together; take the two-sided limit
      const double h = 1e-5;
      auto at = [&](double p) {
        const double sp = model.stddev(p);
        const double dmp = differentiate([&](double q) { return model.mean(q); }, p);
        return sp / std::abs(dmp);
      };
      const double left = at(phi - h), right = at(phi + h);
      const double limit = 0.5 * (left + right);
      if (!std::isfinite(limit))
        throw NumericError("sensitivity: degenerate working point");
      return limit;
    }
    throw NumericError("sensitivity: stationary point, fringe derivative vanishes");
  }
  return s / std::abs(dm);
}

namespace {

std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace

std::pair<double, double> maximize_scalar(const std::function<double(double)>& f,
                                          double lo, double hi, double tol) {
  if (!(hi > lo)) throw ValidationError("maximize_scalar: empty interval");
  constexpr int kGrid = 64;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> xs(kGrid + 1), vs(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    xs[i] = lo + (hi - lo) * i / kGrid;
    vs[i] = f(xs[i]);
    if (!std::isfinite(vs[i]))
      throw NumericError("maximize_scalar: objective not finite at grid point");
    if (vs[i] > best_val) {
      best_val = vs[i];
      best = i;
    }
  }
  const double a = xs[std::max(0, best - 1)];
  const double b = xs[std::min(kGrid, best + 1)];
  auto [x, v] = golden_section_max(f, a, b, tol);
  if (v < best_val) return {xs[best], best_val};
  return {x, v};
}

std::pair<double, double> minimize_scalar(const std::function<double(double)>& f,
                                          double lo, double hi, double tol) {
  auto [x, v] = maximize_scalar([&](double t) { return -f(t); }, lo, hi, tol);
  return {x, -v};
}

ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 8)
    throw ValidationError("fit_scaling: need >= 8 points");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ValidationError("fit_scaling: values must be positive");
    lx.push_back(std::log10(x[i]));
    ly.push_back(std::log10(y[i]));
  }
  const double span = *std::max_element(lx.begin(), lx.end()) -
                      *std::min_element(lx.begin(), lx.end());
  if (span < 2.0) throw ValidationError("fit_scaling: need >= 2 decades of x");

  auto line_fit = [](const std::vector<double>& u, const std::vector<double>& v,
                     size_t from) {
    const size_t n = u.size() - from;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = from; i < u.size(); ++i) {
      sx += u[i];
      sy += v[i];
      sxx += u[i] * u[i];
      sxy += u[i] * v[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;
    double ss = 0, mr = 0;
    for (size_t i = from; i < u.size(); ++i) {
      const double r = v[i] - (icept + slope * u[i]);
      ss += r * r;
      mr = std::max(mr, std::abs(r));
    }
    const double se = (n > 2) ? std::sqrt(ss / (n - 2) * n / denom) : 0.0;
    return std::tuple<double, double, double>(slope, se, mr);
  };

  // curvature probe: compare slopes of the lower and upper halves
  const size_t half = lx.size() / 2;
  auto [slo, selo, mrlo] = line_fit(std::vector<double>(lx.begin(), lx.begin() + half),
                                    std::vector<double>(ly.begin(), ly.begin() + half), 0);
  auto [shi, sehi, mrhi] = line_fit(std::vector<double>(lx.begin() + half, lx.end()),
                                    std::vector<double>(ly.begin() + half, ly.end()), 0);
  (void)selo; (void)sehi; (void)mrlo; (void)mrhi;

  ScalingFit fit;
  size_t from = 0;
  if (std::abs(shi - slo) > 0.05) {
    // keep points above the lowest decade
    const double lmin = *std::min_element(lx.begin(), lx.end());
    std::vector<double> fx, fy;
    for (size_t i = 0; i < lx.size(); ++i) {
      if (lx[i] >= lmin + 1.0) {
        fx.push_back(lx[i]);
        fy.push_back(ly[i]);
      }
    }
    if (fx.size() >= 4) {
      auto [s, se, mr] = line_fit(fx, fy, 0);
      fit.exponent = s;
      fit.stderr_exponent = se;
      fit.max_residual = mr;
      fit.dropped_low_decade = true;
      return fit;
    }
  }
  auto [s, se, mr] = line_fit(lx, ly, from);
  fit.exponent = s;
  fit.stderr_exponent = se;
  fit.max_residual = mr;
  return fit;
}

}  // namespace qmetro
