#include "qmetro/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <sstream>

#include "qmetro/errors.hpp"

namespace qmetro {
namespace fock {

namespace {

long ipow(long base, int exp) {
  long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

void check_leak(double leak, double max_leak, const char* what) {
  if (leak > max_leak) {
    std::ostringstream os;
    os << what << ": truncation leak " << leak << " exceeds " << max_leak
       << " (raise the cutoff)";
    throw NumericError(os.str());
  }
}

}  // namespace

FockVector::FockVector(int n_modes, int cutoff) : n_modes_(n_modes), cutoff_(cutoff) {
  if (n_modes < 1 || n_modes > 6) throw ValidationError("FockVector: 1..6 modes supported");
  if (cutoff < 2) throw ValidationError("FockVector: cutoff must be >= 2");
  amp_ = Eigen::VectorXcd::Zero(ipow(cutoff, n_modes));
}

long FockVector::stride(int mode) const { return ipow(cutoff_, mode); }

long FockVector::index(const std::vector<int>& ns) const {
  long idx = 0;
  for (int k = 0; k < n_modes_; ++k) idx += static_cast<long>(ns[k]) * stride(k);
  return idx;
}

void FockVector::renormalize() {
  const double n2 = norm2();
  if (n2 <= 0.0) throw NumericError("FockVector: zero norm");
  leak_ += std::max(0.0, 1.0 - n2);
  amp_ /= std::sqrt(n2);
}

FockVector FockVector::promoted(int new_cutoff) const {
  if (new_cutoff <= cutoff_) return *this;
  FockVector out(n_modes_, new_cutoff);
  std::vector<int> ns(n_modes_, 0);
  for (long i = 0; i < dim(); ++i) {
    long rem = i;
    for (int k = 0; k < n_modes_; ++k) {
      ns[k] = static_cast<int>(rem % cutoff_);
      rem /= cutoff_;
    }
    out.amp_(out.index(ns)) = amp_(i);
  }
  out.leak_ = leak_;
  return out;
}

FockVector FockVector::tensor(const FockVector& other) const {
  if (other.cutoff_ != cutoff_)
    throw ValidationError("FockVector::tensor: cutoffs must match");
  FockVector out(n_modes_ + other.n_modes_, cutoff_);
  const long da = dim(), db = other.dim();
  for (long j = 0; j < db; ++j)
    for (long i = 0; i < da; ++i)
      out.amp_(j * da + i) = amp_(i) * other.amp_(j);
  out.leak_ = leak_ + other.leak_;
  return out;
}

// ---- builders --------------------------------------------------------------

FockVector vacuum(int n_modes, int cutoff) {
  FockVector out(n_modes, cutoff);
  out.amplitudes()(0) = 1.0;
  return out;
}

FockVector fock_basis(const std::vector<int>& ns, int cutoff) {
  FockVector out(static_cast<int>(ns.size()), cutoff);
  for (int n : ns)
    if (n < 0 || n >= cutoff) throw ValidationError("fock_basis: level out of range");
  out.at(ns) = 1.0;
  return out;
}

FockVector coherent(Cplx alpha, int cutoff, double max_leak) {
  if (!std::isfinite(std::abs(alpha))) throw ValidationError("coherent: non-finite amplitude");
  FockVector out(1, cutoff);
  // amp(n) = e^{-|a|^2/2} a^n / sqrt(n!)
  Cplx term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < cutoff; ++n) {
    out.amplitudes()(n) = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  const double leak = std::max(0.0, 1.0 - out.norm2());
  check_leak(leak, max_leak, "coherent");
  out.add_leak(leak);
  out.renormalize();
  return out;
}

FockVector squeezed_vacuum(double r, double psi, int cutoff, double max_leak) {
  if (!std::isfinite(r)) throw ValidationError("squeezed_vacuum: non-finite r");
  FockVector out(1, cutoff);
  const double mu = std::cosh(r);
  const Cplx nu = std::polar(std::sinh(r), psi);
  // amp(2n) = mu^{-1/2} (nu/2mu)^n sqrt((2n)!)/n!   (even kets only)
  Cplx term = 1.0 / std::sqrt(mu);
  for (int n = 0; 2 * n < cutoff; ++n) {
    out.amplitudes()(2 * n) = term;
    // ratio (2n+2)!,(n+1)! vs (2n)!,n!: sqrt((2n+1)(2n+2))/(n+1)
    term *= (nu / (2.0 * mu)) *
            std::sqrt(static_cast<double>(2 * n + 1) * static_cast<double>(2 * n + 2)) /
            static_cast<double>(n + 1);
  }
  const double leak = std::max(0.0, 1.0 - out.norm2());
  check_leak(leak, max_leak, "squeezed_vacuum");
  out.add_leak(leak);
  out.renormalize();
  return out;
}

FockVector twb(double lambda, double psi, int cutoff, double max_leak) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("twb: lambda must be >= 0");
  FockVector out(2, cutoff);
  // |TWB> = sqrt(1-|t|^2) sum t^n |n,n>,  t = e^{i psi} tanh r, |t|^2 = l/(1+l)
  const double t_abs = std::sqrt(lambda / (1.0 + lambda));
  const Cplx t = std::polar(t_abs, psi);
  Cplx term = std::sqrt(1.0 - t_abs * t_abs);
  for (int n = 0; n < cutoff; ++n) {
    out.at({n, n}) = term;
    term *= t;
  }
  const double leak = std::max(0.0, 1.0 - out.norm2());
  check_leak(leak, max_leak, "twb");
  out.add_leak(leak);
  out.renormalize();
  return out;
}

// ---- ladder primitives ------------------------------------------------------

namespace {

// In-place annihilation on `mode`; exact within the truncated space.
void ladder_down(FockVector& st, int mode) {
  const long s = st.stride(mode);
  const int c = st.cutoff();
  auto& a = st.amplitudes();
  const long dim = st.dim();
  for (long base = 0; base < dim; base += s * c) {
    for (long rest = 0; rest < s; ++rest) {
      const long b = base + rest;
      for (int n = 0; n + 1 < c; ++n)
        a(b + s * n) = std::sqrt(static_cast<double>(n + 1)) * a(b + s * (n + 1));
      a(b + s * (c - 1)) = 0.0;
    }
  }
}

// In-place creation on `mode`; the component raised past the top level is lost.
void ladder_up(FockVector& st, int mode) {
  const long s = st.stride(mode);
  const int c = st.cutoff();
  auto& a = st.amplitudes();
  const long dim = st.dim();
  for (long base = 0; base < dim; base += s * c) {
    for (long rest = 0; rest < s; ++rest) {
      const long b = base + rest;
      for (int n = c - 1; n >= 1; --n)
        a(b + s * n) = std::sqrt(static_cast<double>(n)) * a(b + s * (n - 1));
      a(b) = 0.0;
    }
  }
}

void apply_monomial_inplace(FockVector& st, const Monomial& mono) {
  for (auto it = mono.rbegin(); it != mono.rend(); ++it) {
    if (it->dagger)
      ladder_up(st, it->mode);
    else
      ladder_down(st, it->mode);
  }
}

// acc <- exp(coeff * M) acc where M is the (self-commuting) monomial operator.
void exp_series(FockVector& acc, Cplx coeff, const Monomial& mono) {
  FockVector term = acc;
  const double floor2 = 1e-34 * std::max(acc.norm2(), 1e-300);
  const int kmax = 4 * acc.cutoff() + 32;
  for (int k = 1; k <= kmax; ++k) {
    apply_monomial_inplace(term, mono);
    term.amplitudes() *= coeff / static_cast<double>(k);
    acc.amplitudes() += term.amplitudes();
    if (term.norm2() < floor2) return;
  }
}

void diagonal_scale(FockVector& st, const std::function<Cplx(const std::vector<int>&)>& f) {
  std::vector<int> ns(st.n_modes(), 0);
  const int c = st.cutoff();
  for (long i = 0; i < st.dim(); ++i) {
    long rem = i;
    for (int k = 0; k < st.n_modes(); ++k) {
      ns[k] = static_cast<int>(rem % c);
      rem /= c;
    }
    st.amplitudes()(i) *= f(ns);
  }
}

void finish_evolve(FockVector& st, const char* what) {
  const double n2 = st.norm2();
  const double leak = std::abs(1.0 - n2);
  check_leak(leak, 1e-4, what);
  st.add_leak(std::max(0.0, 1.0 - n2));
  st.amplitudes() /= std::sqrt(n2);
}

// U = exp(G) for an anti-Hermitian G given by its strictly-raising matrix
// elements up(n) = <n+step| G |n>, acting on a single mode (or block) of
// dimension dim. Returned via eigendecomposition of iG.
Eigen::MatrixXcd exp_banded_antihermitian(int dim, int step,
                                          const std::function<Cplx(int)>& up) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Cplx i_unit(0.0, 1.0);
  for (int n = 0; n + step < dim; ++n) {
    const Cplx g = up(n);
    h(n + step, n) = i_unit * g;
    h(n, n + step) = std::conj(i_unit * g);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::exp(Cplx(0.0, -es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void apply_one_mode_matrix(FockVector& st, int mode, const Eigen::MatrixXcd& u) {
  const long s = st.stride(mode);
  const int c = st.cutoff();
  auto& a = st.amplitudes();
  Eigen::VectorXcd fiber(c);
  for (long base = 0; base < st.dim(); base += s * c) {
    for (long rest = 0; rest < s; ++rest) {
      const long b = base + rest;
      for (int n = 0; n < c; ++n) fiber(n) = a(b + s * n);
      fiber = (u * fiber).eval();
      for (int n = 0; n < c; ++n) a(b + s * n) = fiber(n);
    }
  }
}

}  // namespace

// ---- evolvers ---------------------------------------------------------------

void apply_phase(FockVector& state, int mode, double varphi) {
  const long s = state.stride(mode);
  const int c = state.cutoff();
  auto& a = state.amplitudes();
  std::vector<Cplx> ph(c);
  for (int n = 0; n < c; ++n) ph[n] = std::exp(Cplx(0.0, -varphi * n));
  for (long base = 0; base < state.dim(); base += s * c)
    for (long rest = 0; rest < s; ++rest)
      for (int n = 0; n < c; ++n) a(base + rest + s * n) *= ph[n];
}

void apply_displacement(FockVector& state, int mode, Cplx alpha, EvolveMethod method) {
  if (method != EvolveMethod::kFactored) {
    const Eigen::MatrixXcd u = exp_banded_antihermitian(
        state.cutoff(), 1,
        [&](int n) { return alpha * std::sqrt(static_cast<double>(n + 1)); });
    apply_one_mode_matrix(state, mode, u);
    finish_evolve(state, "displacement");
    return;
  }
  // D(a) = e^{-|a|^2/2} exp(a a+) exp(-a* a); both series terminate in the
  // truncated space.
  exp_series(state, -std::conj(alpha), {{mode, false}});
  exp_series(state, alpha, {{mode, true}});
  state.amplitudes() *= std::exp(-0.5 * std::norm(alpha));
  finish_evolve(state, "displacement");
}

void apply_squeezer(FockVector& state, int mode, double r, double psi,
                    EvolveMethod method) {
  if (r == 0.0) return;
  const double mu = std::cosh(r);
  const Cplx nu = std::polar(std::sinh(r), psi);
  if (method != EvolveMethod::kFactored) {
    const Cplx half_xi = 0.5 * std::polar(r, psi);
    const Eigen::MatrixXcd u = exp_banded_antihermitian(
        state.cutoff(), 2, [&](int n) {
          return half_xi * std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
        });
    apply_one_mode_matrix(state, mode, u);
    finish_evolve(state, "squeezer");
    return;
  }
  // S(xi) = exp(nu/2mu a+^2) mu^-(N+1/2) exp(-nu*/2mu a^2)
  exp_series(state, -std::conj(nu) / (2.0 * mu), {{mode, false}, {mode, false}});
  diagonal_scale(state, [&](const std::vector<int>& ns) {
    return Cplx(std::pow(mu, -(ns[mode] + 0.5)), 0.0);
  });
  exp_series(state, nu / (2.0 * mu), {{mode, true}, {mode, true}});
  finish_evolve(state, "squeezer");
}

void apply_beam_splitter(FockVector& state, int mode_a, int mode_b, double theta_bs,
                         double phase, EvolveMethod method) {
  const double c = std::cos(theta_bs), s = std::sin(theta_bs);
  if (method == EvolveMethod::kFactored) {
    if (std::abs(c) < 1e-12) throw NumericError("beam_splitter: factored form singular");
    const double t = s / c;
    const Cplx zp = std::polar(t, phase);
    // U = exp(e^{i th} tan a+b) (cos^2)^{-(Na-Nb)/2} exp(-e^{-i th} tan a b+);
    // the J3 exponent sign follows from the 2x2 SU(2) disentangling.
    exp_series(state, -std::conj(zp), {{mode_a, false}, {mode_b, true}});
    diagonal_scale(state, [&](const std::vector<int>& ns) {
      return Cplx(std::pow(c * c, 0.5 * (ns[mode_b] - ns[mode_a])), 0.0);
    });
    exp_series(state, zp, {{mode_a, true}, {mode_b, false}});
    finish_evolve(state, "beam_splitter");
    return;
  }
  // Blockwise exponential over conserved total photon number.
  const int cut = state.cutoff();
  const Cplx zeta = std::polar(theta_bs, phase);
  const long sa = state.stride(mode_a), sb = state.stride(mode_b);
  auto& amp = state.amplitudes();
  // enumerate fibers over the remaining modes
  std::vector<long> bases;
  const long dim = state.dim();
  for (long i = 0; i < dim; ++i) {
    const int na = static_cast<int>((i / sa) % cut);
    const int nb = static_cast<int>((i / sb) % cut);
    if (na == 0 && nb == 0) bases.push_back(i);
  }
  for (int total = 1; total <= 2 * (cut - 1); ++total) {
    const int lo = std::max(0, total - (cut - 1));
    const int hi = std::min(total, cut - 1);
    const int bdim = hi - lo + 1;
    if (bdim < 1) continue;
    const Eigen::MatrixXcd u = exp_banded_antihermitian(bdim, 1, [&](int j) {
      const int na = lo + j;  // coupling |na, total-na> -> |na+1, total-na-1>
      return zeta * std::sqrt(static_cast<double>(na + 1) * static_cast<double>(total - na));
    });
    Eigen::VectorXcd fiber(bdim);
    for (long base : bases) {
      for (int j = 0; j < bdim; ++j)
        fiber(j) = amp(base + sa * (lo + j) + sb * (total - lo - j));
      fiber = (u * fiber).eval();
      for (int j = 0; j < bdim; ++j)
        amp(base + sa * (lo + j) + sb * (total - lo - j)) = fiber(j);
    }
  }
  finish_evolve(state, "beam_splitter");
}

void apply_two_mode_squeezer(FockVector& state, int mode_a, int mode_b, double r,
                             double psi, EvolveMethod method) {
  if (r == 0.0) return;
  const double mu = std::cosh(r);
  const Cplx nu = std::polar(std::sinh(r), psi);
  if (method != EvolveMethod::kFactored) {
    const int cut = state.cutoff();
    const Cplx xi = std::polar(r, psi);
    const long sa = state.stride(mode_a), sb = state.stride(mode_b);
    auto& amp = state.amplitudes();
    std::vector<long> bases;
    for (long i = 0; i < state.dim(); ++i) {
      const int na = static_cast<int>((i / sa) % cut);
      const int nb = static_cast<int>((i / sb) % cut);
      if (na == 0 && nb == 0) bases.push_back(i);
    }
    // blocks of fixed na-nb = delta, state |m+max(delta,0), m+max(-delta,0)>
    for (int delta = -(cut - 1); delta <= cut - 1; ++delta) {
      const int a0 = std::max(delta, 0), b0 = std::max(-delta, 0);
      const int bdim = cut - std::abs(delta);
      if (bdim < 1) continue;
      const Eigen::MatrixXcd u = exp_banded_antihermitian(bdim, 1, [&](int m) {
        return xi * std::sqrt(static_cast<double>(a0 + m + 1) * static_cast<double>(b0 + m + 1));
      });
      Eigen::VectorXcd fiber(bdim);
      for (long base : bases) {
        for (int m = 0; m < bdim; ++m) fiber(m) = amp(base + sa * (a0 + m) + sb * (b0 + m));
        fiber = (u * fiber).eval();
        for (int m = 0; m < bdim; ++m) amp(base + sa * (a0 + m) + sb * (b0 + m)) = fiber(m);
      }
    }
    finish_evolve(state, "two_mode_squeezer");
    return;
  }
  // S2(xi) = exp(nu/mu a+b+) mu^{-(Na+Nb+1)} exp(-nu*/mu ab); the exponent is
  // -2 K0 with K0 = (Na+Nb+1)/2, which is what keeps the map unitary.
  exp_series(state, -std::conj(nu) / mu, {{mode_a, false}, {mode_b, false}});
  diagonal_scale(state, [&](const std::vector<int>& ns) {
    return Cplx(std::pow(mu, -static_cast<double>(ns[mode_a] + ns[mode_b] + 1)), 0.0);
  });
  exp_series(state, nu / mu, {{mode_a, true}, {mode_b, true}});
  finish_evolve(state, "two_mode_squeezer");
}

// ---- moments ----------------------------------------------------------------

Cplx moment(const FockVector& state, const Monomial& monomial) {
  int raise_count = 0;
  for (const auto& op : monomial) {
    if (op.mode < 0 || op.mode >= state.n_modes())
      throw ValidationError("moment: mode index out of range");
    if (op.dagger) ++raise_count;
  }
  const long new_dim = ipow(state.cutoff() + raise_count, state.n_modes());
  if (new_dim > (1L << 26)) throw NumericError("moment: promoted space too large");
  FockVector bra = state.promoted(state.cutoff() + raise_count);
  FockVector ket = bra;
  apply_monomial_inplace(ket, monomial);
  return bra.amplitudes().dot(ket.amplitudes());
}

// ---- detection --------------------------------------------------------------

CountDistribution::CountDistribution(int n_modes, int cutoff, Eigen::VectorXd probs)
    : n_modes_(n_modes), cutoff_(cutoff), probs_(std::move(probs)) {}

long CountDistribution::index(const std::vector<int>& ns) const {
  long idx = 0, s = 1;
  for (int k = 0; k < n_modes_; ++k, s *= cutoff_) idx += ns[k] * s;
  return idx;
}

double CountDistribution::prob(const std::vector<int>& counts) const {
  return probs_(index(counts));
}

Eigen::VectorXd CountDistribution::marginal(int mode) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cutoff_);
  const long s = ipow(cutoff_, mode);
  for (long i = 0; i < probs_.size(); ++i)
    out(static_cast<int>((i / s) % cutoff_)) += probs_(i);
  return out;
}

double CountDistribution::mean(int mode) const {
  const Eigen::VectorXd m = marginal(mode);
  double v = 0.0;
  for (int n = 0; n < cutoff_; ++n) v += n * m(n);
  return v;
}

double CountDistribution::covariance(int mode_a, int mode_b) const {
  const long sa = ipow(cutoff_, mode_a), sb = ipow(cutoff_, mode_b);
  double mab = 0.0;
  for (long i = 0; i < probs_.size(); ++i) {
    const double na = static_cast<double>((i / sa) % cutoff_);
    const double nb = static_cast<double>((i / sb) % cutoff_);
    mab += na * nb * probs_(i);
  }
  return mab - mean(mode_a) * mean(mode_b);
}

CountDistribution detect(const FockVector& state, const std::vector<double>& etas) {
  if (static_cast<int>(etas.size()) != state.n_modes())
    throw ValidationError("detect: one eta per mode required");
  for (double e : etas)
    if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("detect: eta must lie in [0,1]");
  const int c = state.cutoff();
  Eigen::VectorXd probs = state.amplitudes().cwiseAbs2();
  // Thin one mode at a time: P'(m) = sum_{n>=m} C(n,m) eta^m (1-eta)^{n-m} P(n).
  for (int mode = 0; mode < state.n_modes(); ++mode) {
    const double eta = etas[mode];
    if (eta == 1.0) continue;
    Eigen::MatrixXd thin = Eigen::MatrixXd::Zero(c, c);
    for (int n = 0; n < c; ++n) {
      double term = std::pow(1.0 - eta, n);  // m = 0
      for (int m = 0; m <= n; ++m) {
        thin(m, n) = term;
        // C(n,m+1)/C(n,m) * eta/(1-eta)
        if (m < n) term *= (static_cast<double>(n - m) / (m + 1.0)) * eta / (1.0 - eta);
      }
    }
    const long s = ipow(c, mode);
    Eigen::VectorXd fiber(c);
    for (long base = 0; base < probs.size(); base += s * c) {
      for (long rest = 0; rest < s; ++rest) {
        for (int n = 0; n < c; ++n) fiber(n) = probs(base + rest + s * n);
        fiber = (thin * fiber).eval();
        for (int n = 0; n < c; ++n) probs(base + rest + s * n) = fiber(n);
      }
    }
  }
  return CountDistribution(state.n_modes(), c, std::move(probs));
}

}  // namespace fock
}  // namespace qmetro
