#include "qmetro/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qmetro/errors.hpp"

namespace qmetro {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

}  // namespace

GaussianState::GaussianState(int n_modes, Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : n_modes_(n_modes), mean_(std::move(mean)), cov_(std::move(cov)) {
  const int d = 2 * n_modes_;
  if (n_modes_ <= 0 || mean_.size() != d || cov_.rows() != d || cov_.cols() != d)
    throw ValidationError("GaussianState: inconsistent dimensions");
}

GaussianState GaussianState::vacuum(int n_modes) {
  return GaussianState(n_modes, Eigen::VectorXd::Zero(2 * n_modes),
                       Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState GaussianState::coherent(std::complex<double> alpha) {
  require_finite(std::abs(alpha), "coherent amplitude");
  Eigen::VectorXd mean(2);
  mean << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return GaussianState(1, mean, Eigen::MatrixXd::Identity(2, 2));
}

GaussianState GaussianState::squeezed(std::complex<double> alpha, double r, double psi) {
  require_finite(std::abs(alpha), "coherent amplitude");
  require_finite(r, "squeezing parameter");
  GaussianState out = vacuum(1);
  out = apply(single_mode_squeezer(r, psi), out, {0});
  out = apply(displacement(alpha), out, {0});
  return out;
}

GaussianState GaussianState::thermal(double n_mean) {
  if (!(n_mean >= 0.0) || !std::isfinite(n_mean))
    throw ValidationError("thermal: mean photon number must be >= 0");
  return GaussianState(1, Eigen::VectorXd::Zero(2),
                       (2.0 * n_mean + 1.0) * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState GaussianState::twb(double lambda, double psi) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("twb: mean photons per mode must be >= 0");
  const double r = std::asinh(std::sqrt(lambda));
  return apply(two_mode_squeezer(r, psi), vacuum(2), {0, 1});
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  const int n = n_modes_ + other.n_modes_;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2 * n);
  mean.head(2 * n_modes_) = mean_;
  mean.tail(2 * other.n_modes_) = other.mean_;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cov.topLeftCorner(2 * n_modes_, 2 * n_modes_) = cov_;
  cov.bottomRightCorner(2 * other.n_modes_, 2 * other.n_modes_) = other.cov_;
  return GaussianState(n, std::move(mean), std::move(cov));
}

std::complex<double> GaussianState::mode_amplitude(int mode) const {
  return {0.5 * mean_(2 * mode), 0.5 * mean_(2 * mode + 1)};
}

double GaussianState::mean_photons(int mode) const {
  // <N> = (<X^2> + <P^2> - 2)/4
  const int i = 2 * mode;
  const double xx = cov_(i, i) + mean_(i) * mean_(i);
  const double pp = cov_(i + 1, i + 1) + mean_(i + 1) * mean_(i + 1);
  return 0.25 * (xx + pp - 2.0);
}

double GaussianState::total_mean_photons() const {
  double total = 0.0;
  for (int k = 0; k < n_modes_; ++k) total += mean_photons(k);
  return total;
}

bool GaussianState::is_pure(double tol) const {
  return std::abs(cov_.determinant() - 1.0) <= tol * (1.0 + std::abs(cov_.determinant()));
}

void GaussianState::check_physical(double tol) const {
  const int d = 2 * n_modes_;
  const double sym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if (sym > 1e-12 * scale) {
    std::ostringstream os;
    os << "GaussianState: covariance asymmetric by " << sym;
    throw NumericError(os.str());
  }
  Eigen::MatrixXcd m = cov_.cast<std::complex<double>>();
  m += std::complex<double>(0, 1) * symplectic_form(n_modes_).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -tol * scale) {
    std::ostringstream os;
    os << "GaussianState: cov + i*Omega has eigenvalue " << min_ev;
    throw NumericError(os.str());
  }
  (void)d;
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double SymplecticOp::symplectic_defect() const {
  const int n = n_modes();
  const Eigen::MatrixXd omega = symplectic_form(n);
  return (matrix.transpose() * omega * matrix - omega).cwiseAbs().maxCoeff();
}

SymplecticOp SymplecticOp::then(const SymplecticOp& next) const {
  return {next.matrix * matrix, next.matrix * displacement + next.displacement};
}

SymplecticOp beam_splitter(double theta_bs, double phase) {
  const double c = std::cos(theta_bs), s = std::sin(theta_bs);
  const double ct = std::cos(phase), st = std::sin(phase);
  Eigen::MatrixXd m(4, 4);
  // rows/cols: (x_a, p_a, x_b, p_b)
  m << c, 0, s * ct, -s * st,
       0, c, s * st, s * ct,
       -s * ct, -s * st, c, 0,
       s * st, -s * ct, 0, c;
  return {m, Eigen::VectorXd::Zero(4)};
}

SymplecticOp phase_shift(double varphi) {
  const double c = std::cos(varphi), s = std::sin(varphi);
  Eigen::MatrixXd m(2, 2);
  m << c, s, -s, c;
  return {m, Eigen::VectorXd::Zero(2)};
}

SymplecticOp single_mode_squeezer(double r, double psi) {
  const double mu = std::cosh(r);
  const double nr = std::sinh(r) * std::cos(psi);
  const double ni = std::sinh(r) * std::sin(psi);
  Eigen::MatrixXd m(2, 2);
  m << mu + nr, ni, ni, mu - nr;
  return {m, Eigen::VectorXd::Zero(2)};
}

SymplecticOp two_mode_squeezer(double r, double psi) {
  const double mu = std::cosh(r);
  const double nr = std::sinh(r) * std::cos(psi);
  const double ni = std::sinh(r) * std::sin(psi);
  Eigen::MatrixXd m(4, 4);
  // a -> mu a + nu b+, b -> mu b + nu a+ (nu on both: forced by S^T Omega S = Omega)
  m << mu, 0, nr, ni,
       0, mu, ni, -nr,
       nr, ni, mu, 0,
       ni, -nr, 0, mu;
  return {m, Eigen::VectorXd::Zero(4)};
}

SymplecticOp displacement(std::complex<double> alpha) {
  Eigen::VectorXd d(2);
  d << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return {Eigen::MatrixXd::Identity(2, 2), d};
}

SymplecticOp identity_op(int n_modes) {
  return {Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
          Eigen::VectorXd::Zero(2 * n_modes)};
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state,
                    const std::vector<int>& modes) {
  const int n_op = op.n_modes();
  if (static_cast<int>(modes.size()) != n_op)
    throw ValidationError("apply: mode count does not match operator");
  for (size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= state.n_modes())
      throw ValidationError("apply: mode index out of range");
    for (size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j]) throw ValidationError("apply: repeated mode index");
  }
  const int d = 2 * state.n_modes();
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd disp = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n_op; ++i) {
    disp.segment<2>(2 * modes[i]) = op.displacement.segment<2>(2 * i);
    for (int j = 0; j < n_op; ++j)
      full.block<2, 2>(2 * modes[i], 2 * modes[j]) = op.matrix.block<2, 2>(2 * i, 2 * j);
  }
  Eigen::VectorXd mean = full * state.mean() + disp;
  Eigen::MatrixXd cov = full * state.cov() * full.transpose();
  return GaussianState(state.n_modes(), std::move(mean), std::move(cov));
}

GaussianState apply_loss(const GaussianState& state, double eta,
                         const std::vector<int>& modes) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("loss: eta must lie in [0,1]");
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  const double root = std::sqrt(eta);
  for (int m : modes) {
    if (m < 0 || m >= state.n_modes()) throw ValidationError("loss: mode index out of range");
    mean.segment<2>(2 * m) *= root;
    // scale row/column blocks, then add (1-eta) on the diagonal block
    cov.middleRows<2>(2 * m) *= root;
    cov.middleCols<2>(2 * m) *= root;
    cov.block<2, 2>(2 * m, 2 * m) += (1.0 - eta) * Eigen::Matrix2d::Identity();
  }
  return GaussianState(state.n_modes(), std::move(mean), std::move(cov));
}

}  // namespace qmetro
