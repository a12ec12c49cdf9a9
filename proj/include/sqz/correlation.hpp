#pragma once

#include "sqz/types.hpp"

namespace sqz {

// First-order correlation on a time grid: diagonal G1(t), the full
// G1(t1, t2) = <a^dagger(t1) a(t2)>, and per-mode (or per-packet)
// contributions to G1(t), one column each.
struct G1Result {
  RVector time;
  RVector g1;
  CMatrix cross;
  RMatrix contributions;
  double n_pulse = 0.0;
};

struct G2Result {
  RVector time;
  RMatrix coherent;
  RMatrix incoherent;

  RMatrix total() const { return coherent + incoherent; }
};

// sqrt(sum |a - b|^2 / sum |b|^2) restricted to entries where |b| exceeds
// `support` times its maximum.
double relative_l2(const RMatrix& a, const RMatrix& b, double support = 0.0);
double relative_l2(const RVector& a, const RVector& b, double support = 0.0);

} // namespace sqz
