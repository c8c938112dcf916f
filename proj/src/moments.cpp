#include "qmetro/moments.hpp"

#include <cmath>

#include "qmetro/errors.hpp"

namespace qmetro {

WickContext<double> wick_context(const GaussianState& state) {
  using Cplx = std::complex<double>;
  const int n = state.n_modes();
  WickContext<double> ctx;
  ctx.n_modes = n;
  ctx.mean.resize(n);
  for (int k = 0; k < n; ++k) ctx.mean[k] = state.mode_amplitude(k);

  // <dR_i dR_j> = cov_ij + i Omega_ij; a = (X+iP)/2, a+ = (X-iP)/2.
  const auto& cov = state.cov();
  const int n2 = 2 * n;
  ctx.contr.assign(static_cast<size_t>(n2) * n2, Cplx(0, 0));
  const Cplx half(0.5, 0.0), ihalf(0.0, 0.5);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      // quadrature second moments with the commutator part
      Cplx xx = cov(2 * mu, 2 * nu);
      Cplx xp = cov(2 * mu, 2 * nu + 1);
      Cplx px = cov(2 * mu + 1, 2 * nu);
      Cplx pp = cov(2 * mu + 1, 2 * nu + 1);
      if (mu == nu) {
        xp += Cplx(0, 1);
        px -= Cplx(0, 1);
      }
      for (int du = 0; du < 2; ++du) {
        for (int dv = 0; dv < 2; ++dv) {
          const Cplx cu_p = du ? -ihalf : ihalf;  // coefficient of P_mu
          const Cplx cv_p = dv ? -ihalf : ihalf;
          const Cplx val = half * half * xx + half * cv_p * xp + cu_p * half * px +
                           cu_p * cv_p * pp;
          ctx.contr[(2 * mu + du) * n2 + (2 * nu + dv)] = val;
        }
      }
    }
  }
  return ctx;
}

std::complex<double> wick_moment(const GaussianState& state, const Monomial& monomial) {
  return wick_expectation(wick_context(state), monomial);
}

NumberStats number_stats(const GaussianState& state,
                         const std::vector<std::pair<int, int>>& pairs) {
  const auto ctx = wick_context(state);
  const int n = state.n_modes();
  NumberStats out;
  out.mean.resize(n);
  out.var.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto nk = OpPoly<double>::number(k);
    out.mean[k] = expectation(ctx, nk).real();
    out.var[k] = variance(ctx, nk);
  }
  for (const auto& [a, b] : pairs) {
    const auto da = centered(ctx, OpPoly<double>::number(a));
    const auto db = centered(ctx, OpPoly<double>::number(b));
    out.pair_cov.push_back(expectation(ctx, da * db).real());
  }
  return out;
}

std::pair<double, double> photon_mean_var(const GaussianState& state, int mode) {
  const auto ctx = wick_context(state);
  const auto nk = OpPoly<double>::number(mode);
  return {expectation(ctx, nk).real(), variance(ctx, nk)};
}

double nrf(const GaussianState& state, int mode_a, int mode_b, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("nrf: sign must be +1 or -1");
  const auto ctx = wick_context(state);
  const auto d = OpPoly<double>::number(mode_a) +
                 OpPoly<double>::number(mode_b) * static_cast<double>(sign);
  const double total = expectation(ctx, OpPoly<double>::number(mode_a)).real() +
                       expectation(ctx, OpPoly<double>::number(mode_b)).real();
  if (total <= 0.0) throw NumericError("nrf: zero total mean photon flux");
  return variance(ctx, d) / total;
}

}  // namespace qmetro
