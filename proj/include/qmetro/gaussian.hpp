#ifndef QMETRO_GAUSSIAN_HPP
#define QMETRO_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qmetro {

// Quadrature convention: X = a + a~, P = i(a~ - a), ordering (x1,p1,...,xn,pn).
// Vacuum has mean 0 and covariance I ([X,P] = 2i, var[X_theta] = 1).
class GaussianState {
 public:
  GaussianState(int n_modes, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(int n_modes);
  static GaussianState coherent(std::complex<double> alpha);
  // Displaced squeezed state D(alpha)S(xi)|0>, xi = r e^{i psi}.
  static GaussianState squeezed(std::complex<double> alpha, double r, double psi = 0.0);
  // Thermal state with mean photon number n_mean.
  static GaussianState thermal(double n_mean);
  // Twin-beam (two-mode squeezed vacuum); lambda = mean photons per mode.
  static GaussianState twb(double lambda, double psi = 0.0);

  // Tensor product, appending the modes of `other`.
  GaussianState tensor(const GaussianState& other) const;

  int n_modes() const { return n_modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  std::complex<double> mode_amplitude(int mode) const;  // <a_k>
  double mean_photons(int mode) const;                  // <a~a> on one mode
  double total_mean_photons() const;

  // det(cov) == 1 within tol <=> pure.
  bool is_pure(double tol = 1e-6) const;

  // cov symmetric and cov + i*Omega >= 0 (min eigenvalue >= -tol).
  void check_physical(double tol = 1e-9) const;

 private:
  int n_modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

// Linear mode transformation: mean -> S mean + d, cov -> S cov S^T.
// S is the quadrature matrix of the Heisenberg mode map.
struct SymplecticOp {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd displacement;

  int n_modes() const { return static_cast<int>(matrix.rows()) / 2; }
  // || S^T Omega S - Omega ||_max
  double symplectic_defect() const;
  SymplecticOp then(const SymplecticOp& next) const;  // this first, then next
};

// Beam splitter on two modes: a -> a cos(phi) + b e^{i theta} sin(phi),
// b -> b cos(phi) - a e^{-i theta} sin(phi). Transmissivity tau = cos^2(phi).
SymplecticOp beam_splitter(double theta_bs, double phase = 0.0);

// Single-mode phase shift a -> a e^{-i varphi}.
SymplecticOp phase_shift(double varphi);

// Single-mode squeezer S(xi), xi = r e^{i psi}: a -> a cosh r + a~ e^{i psi} sinh r.
SymplecticOp single_mode_squeezer(double r, double psi = 0.0);

// Two-mode squeezer S2(xi): a -> a cosh r + b~ e^{i psi} sinh r, and b alike.
SymplecticOp two_mode_squeezer(double r, double psi = 0.0);

// Single-mode displacement D(alpha).
SymplecticOp displacement(std::complex<double> alpha);

SymplecticOp identity_op(int n_modes);

// Apply `op` to the modes listed in `modes` (distinct, in range).
GaussianState apply(const SymplecticOp& op, const GaussianState& state,
                    const std::vector<int>& modes);

// Pure-loss channel, transmissivity eta per listed mode:
// cov -> eta cov + (1-eta) I, mean -> sqrt(eta) mean.
GaussianState apply_loss(const GaussianState& state, double eta,
                         const std::vector<int>& modes);

// Block-diagonal symplectic form, Omega_2 = [[0,1],[-1,0]] per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

}  // namespace qmetro

#endif
