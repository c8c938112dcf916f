#ifndef QMETRO_LADDER_HPP
#define QMETRO_LADDER_HPP

#include <vector>

namespace qmetro {

// One annihilation (dagger=false) or creation (dagger=true) operator.
struct LadderOp {
  int mode = 0;
  bool dagger = false;
};

// Ordered operator product, leftmost factor first.
using Monomial = std::vector<LadderOp>;

inline Monomial number_monomial(int mode) {
  return {{mode, true}, {mode, false}};
}

inline Monomial concat(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace qmetro

#endif
