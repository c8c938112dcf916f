#ifndef QMETRO_WICK_HPP
#define QMETRO_WICK_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <quadmath.h>
#include <utility>
#include <vector>

#include "qmetro/errors.hpp"
#include "qmetro/ladder.hpp"

namespace qmetro {

// Expectations of ordered ladder-operator products on a Gaussian state are
// sums over pairings of second-order contractions plus first-moment
// splittings (Wick/Isserlis with displacement). The engine is templated on
// the real scalar so selected evaluations can run beyond double precision.

template <typename R> struct ScalarOps;

template <> struct ScalarOps<double> {
  static double sqrt(double x) { return std::sqrt(x); }
  static double sin(double x) { return std::sin(x); }
  static double cos(double x) { return std::cos(x); }
  static double sinh(double x) { return std::sinh(x); }
  static double cosh(double x) { return std::cosh(x); }
  static double abs(double x) { return std::fabs(x); }
};

template <> struct ScalarOps<long double> {
  static long double sqrt(long double x) { return sqrtl(x); }
  static long double sin(long double x) { return sinl(x); }
  static long double cos(long double x) { return cosl(x); }
  static long double sinh(long double x) { return sinhl(x); }
  static long double cosh(long double x) { return coshl(x); }
  static long double abs(long double x) { return fabsl(x); }
};

template <> struct ScalarOps<__float128> {
  static __float128 sqrt(__float128 x) { return sqrtq(x); }
  static __float128 sin(__float128 x) { return sinq(x); }
  static __float128 cos(__float128 x) { return cosq(x); }
  static __float128 sinh(__float128 x) { return sinhq(x); }
  static __float128 cosh(__float128 x) { return coshq(x); }
  static __float128 abs(__float128 x) { return fabsq(x); }
};

inline constexpr std::size_t kWickOperatorCap = 8;

// First moments <a_k> and the ordered pair contractions
// <(o_i - <o_i>)(o_j - <o_j>)> for every ladder-op pair, indexed 2*mode+dag.
template <typename R>
struct WickContext {
  int n_modes = 0;
  std::vector<std::complex<R>> mean;   // size n_modes
  std::vector<std::complex<R>> contr;  // (2n)^2, row-major, product order

  std::complex<R> first_moment(const LadderOp& op) const {
    return op.dagger ? std::conj(mean[op.mode]) : mean[op.mode];
  }
  std::complex<R> contraction(const LadderOp& u, const LadderOp& v) const {
    const int n2 = 2 * n_modes;
    return contr[(2 * u.mode + (u.dagger ? 1 : 0)) * n2 + 2 * v.mode + (v.dagger ? 1 : 0)];
  }
};

namespace detail {

template <typename R>
std::complex<R> wick_rec(const WickContext<R>& ctx, const LadderOp* ops,
                         unsigned mask, int first, int count) {
  if (count == 0) return std::complex<R>(R(1), R(0));
  while (!(mask & (1u << first))) ++first;
  const unsigned rest = mask & ~(1u << first);
  // singleton: take the first moment
  std::complex<R> total = ctx.first_moment(ops[first]) *
                          wick_rec(ctx, ops, rest, first + 1, count - 1);
  // pair with each later operator
  if (count >= 2) {
    for (int j = first + 1; j < static_cast<int>(kWickOperatorCap); ++j) {
      if (!(rest & (1u << j))) continue;
      total += ctx.contraction(ops[first], ops[j]) *
               wick_rec(ctx, ops, rest & ~(1u << j), first + 1, count - 2);
    }
  }
  return total;
}

}  // namespace detail

template <typename R>
std::complex<R> wick_expectation(const WickContext<R>& ctx, const Monomial& mono) {
  if (mono.size() > kWickOperatorCap)
    throw ValidationError("wick: operator product exceeds the 8-operator cap");
  if (mono.empty()) return std::complex<R>(R(1), R(0));
  for (const auto& op : mono)
    if (op.mode < 0 || op.mode >= ctx.n_modes)
      throw ValidationError("wick: mode index out of range");
  return detail::wick_rec(ctx, mono.data(), (1u << mono.size()) - 1u, 0,
                          static_cast<int>(mono.size()));
}

// Sum of coeff * monomial terms; products expand by concatenation.
template <typename R>
struct OpPoly {
  using Term = std::pair<std::complex<R>, Monomial>;
  std::vector<Term> terms;

  static OpPoly constant(std::complex<R> c) { return {{{c, Monomial{}}}}; }
  static OpPoly number(int mode) {
    return {{{std::complex<R>(R(1), R(0)), number_monomial(mode)}}};
  }

  OpPoly& operator+=(const OpPoly& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    return *this;
  }
  OpPoly operator+(const OpPoly& other) const {
    OpPoly out = *this;
    out += other;
    return out;
  }
  OpPoly operator-(const OpPoly& other) const { return *this + other * R(-1); }
  OpPoly operator*(R scalar) const {
    OpPoly out = *this;
    for (auto& t : out.terms) t.first *= scalar;
    return out;
  }
  OpPoly operator*(const OpPoly& other) const {
    OpPoly out;
    out.terms.reserve(terms.size() * other.terms.size());
    for (const auto& lhs : terms)
      for (const auto& rhs : other.terms)
        out.terms.push_back({lhs.first * rhs.first, concat(lhs.second, rhs.second)});
    return out;
  }
};

template <typename R>
std::complex<R> expectation(const WickContext<R>& ctx, const OpPoly<R>& poly) {
  std::complex<R> total(R(0), R(0));
  for (const auto& t : poly.terms) total += t.first * wick_expectation(ctx, t.second);
  return total;
}

template <typename R>
OpPoly<R> centered(const WickContext<R>& ctx, const OpPoly<R>& poly) {
  return poly - OpPoly<R>::constant(expectation(ctx, poly));
}

template <typename R>
R variance(const WickContext<R>& ctx, const OpPoly<R>& poly) {
  const OpPoly<R> d = centered(ctx, poly);
  return expectation(ctx, d * d).real();
}

}  // namespace qmetro

#endif
