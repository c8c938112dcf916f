#ifndef QMETRO_RNG_HPP
#define QMETRO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qmetro {

// Deterministic RNG used everywhere randomness is needed. The standard
// distributions are implementation-defined, so samplers are hand-rolled on
// top of mt19937_64 to keep output byte-stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream for grid point / trial `index` under a master seed.
  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(splitmix64(master_seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; safe as a log() argument.
  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform_pos();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  // Knuth for small means, PTRD-style normal approximation rejection for
  // large ones (Hormann's transformed rejection).
  long poisson(double mean);

  // Marsaglia-Tsang; shape > 0, scale > 0.
  double gamma(double shape, double scale);

  long binomial(long n, double p);

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline long Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    double l = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > l);
    return k - 1;
  }
  // Atkinson-style rejection via logistic envelope.
  double c = 0.767 - 3.36 / mean;
  double beta = M_PI / std::sqrt(3.0 * mean);
  double alpha = beta * mean;
  double k = std::log(c) - mean - std::log(beta);
  for (;;) {
    double u = uniform_pos();
    double x = (alpha - std::log((1.0 - u) / u)) / beta;
    long n = static_cast<long>(std::floor(x + 0.5));
    if (n < 0) continue;
    double v = uniform_pos();
    double y = alpha - beta * x;
    double t = 1.0 + std::exp(y);
    double lhs = y + std::log(v / (t * t));
    double rhs = k + n * std::log(mean) - std::lgamma(n + 1.0);
    if (lhs <= rhs) return n;
  }
}

inline double Rng::gamma(double shape, double scale) {
  if (shape < 1.0) {
    // Boost to shape+1 and rescale (Marsaglia-Tsang corollary).
    double u = uniform_pos();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

inline long Rng::binomial(long n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  if (n < 32) {
    long count = 0;
    for (long i = 0; i < n; ++i)
      if (uniform() < p) ++count;
    return count;
  }
  // Waiting-time (geometric skips) method, O(n*p) expected.
  long count = 0;
  double log_q = std::log1p(-p);
  double sum = 0.0;
  for (;;) {
    sum += std::log(uniform_pos()) / static_cast<double>(n - count);
    if (sum < log_q) return count;
    ++count;
    if (count >= n) return n;
  }
}

}  // namespace qmetro

#endif
