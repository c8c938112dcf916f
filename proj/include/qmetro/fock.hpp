#ifndef QMETRO_FOCK_HPP
#define QMETRO_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qmetro/ladder.hpp"

namespace qmetro {
namespace fock {

using Cplx = std::complex<double>;

// Truncated number-basis state. `cutoff` is the number of levels kept per
// mode (photon numbers 0 .. cutoff-1); amplitudes has cutoff^n entries with
// index = sum_k n_k * cutoff^k.
class FockVector {
 public:
  FockVector(int n_modes, int cutoff);

  int n_modes() const { return n_modes_; }
  int cutoff() const { return cutoff_; }
  long dim() const { return static_cast<long>(amp_.size()); }
  long stride(int mode) const;
  long index(const std::vector<int>& ns) const;

  Cplx& at(const std::vector<int>& ns) { return amp_(index(ns)); }
  Cplx at(const std::vector<int>& ns) const { return amp_(index(ns)); }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

  double norm2() const { return amp_.squaredNorm(); }
  // Accumulated probability lost to renormalizations so far.
  double leak() const { return leak_; }
  void add_leak(double l) { leak_ += l; }
  void renormalize();

  FockVector promoted(int new_cutoff) const;
  FockVector tensor(const FockVector& other) const;

 private:
  int n_modes_;
  int cutoff_;
  Eigen::VectorXcd amp_;
  double leak_ = 0.0;
};

// 40 keeps two-mode oracles exact to ~1e-12 at the amplitudes used here;
// 18 caps 4-mode arrays at 18^4 ~ 105k entries.
inline int default_cutoff(int n_modes) { return n_modes <= 2 ? 40 : 18; }

// ---- construction (closed-form expansions) -------------------------------
// All builders raise NumericError if the truncation leak exceeds `max_leak`.

FockVector vacuum(int n_modes, int cutoff);
FockVector fock_basis(const std::vector<int>& ns, int cutoff);
FockVector coherent(Cplx alpha, int cutoff, double max_leak = 1e-6);
FockVector squeezed_vacuum(double r, double psi, int cutoff, double max_leak = 1e-6);
// lambda = mean photons per mode.
FockVector twb(double lambda, double psi, int cutoff, double max_leak = 1e-6);

// ---- evolution ------------------------------------------------------------

// The normal-ordered factorizations amplify intermediate amplitudes by
// sec^dn-type factors at truncation-scale occupations, so the blockwise
// generator exponential (exact per photon-number block for the beam
// splitter) is the default; the factored route stays available as an
// independent cross-check.
enum class EvolveMethod {
  kAuto,      // blockwise generator exponential
  kFactored,  // normal-ordered SU(2)/SU(1,1) factorization
  kBlockExp,  // same as kAuto
};

void apply_phase(FockVector& state, int mode, double varphi);
void apply_displacement(FockVector& state, int mode, Cplx alpha,
                        EvolveMethod method = EvolveMethod::kAuto);
void apply_squeezer(FockVector& state, int mode, double r, double psi,
                    EvolveMethod method = EvolveMethod::kAuto);
void apply_beam_splitter(FockVector& state, int mode_a, int mode_b, double theta_bs,
                         double phase, EvolveMethod method = EvolveMethod::kAuto);
void apply_two_mode_squeezer(FockVector& state, int mode_a, int mode_b, double r,
                             double psi, EvolveMethod method = EvolveMethod::kAuto);

// ---- measurement ----------------------------------------------------------

// Exact expectation of an ordered ladder-operator product. The state is
// promoted internally so creation operators cannot overflow the cutoff.
Cplx moment(const FockVector& state, const Monomial& monomial);

// Joint photon-count distribution after per-mode Bernoulli thinning with
// efficiency etas[k] (analytic binomial convolution, not sampling).
class CountDistribution {
 public:
  CountDistribution(int n_modes, int cutoff, Eigen::VectorXd probs);

  int n_modes() const { return n_modes_; }
  int cutoff() const { return cutoff_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  double prob(const std::vector<int>& counts) const;
  Eigen::VectorXd marginal(int mode) const;
  double mean(int mode) const;
  double covariance(int mode_a, int mode_b) const;  // var when a == b

 private:
  long index(const std::vector<int>& ns) const;
  int n_modes_;
  int cutoff_;
  Eigen::VectorXd probs_;
};

CountDistribution detect(const FockVector& state, const std::vector<double>& etas);

}  // namespace fock
}  // namespace qmetro

#endif
