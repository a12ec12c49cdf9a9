#pragma once

#include <vector>

#include "sqz/types.hpp"

namespace sqz {

// Eigenvalues are sorted in descending order; columns of `vectors` match.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
  int sweeps = 0;
};

struct RealSymmetricEigen {
  RVector values;
  RMatrix vectors;
  int sweeps = 0;
};

HermitianEigen hermitian_eigen(const CMatrix& h);
RealSymmetricEigen symmetric_eigen(const RMatrix& a);

// A = F diag(s) F^T with F unitary and s >= 0 sorted descending.
struct Takagi {
  RVector values;
  CMatrix vectors;
};

Takagi takagi(const CMatrix& a);

// Sign freedom of each column fixed so its largest-magnitude component has
// arg in (-pi/2, pi/2].
void canonical_sign(CMatrix& f);

// A = U P = Q U. For symmetric A the unitary factor is symmetric and
// P = conj(F) S F^T, Q = F S F^dagger in terms of the Takagi factors.
struct Polar {
  CMatrix U;
  CMatrix P;
  CMatrix Q;
  HermitianEigen p_eigen;
  HermitianEigen q_eigen;
};

Polar polar(const CMatrix& a);

enum class HermFn { Sinh, Cosh, Tanh, Sech, Csch, Coth, Ln, LnSech, SinhSq, SinhCosh };

double apply_scalar(HermFn f, double x);

struct HermFnResult {
  CMatrix value;
  // Eigen-directions removed by the floor (csch and coth only).
  std::vector<int> dropped;
};

inline constexpr double singular_floor = 1e-8;

HermFnResult herm_fn(const HermitianEigen& eig, HermFn f);
HermFnResult herm_fn(const CMatrix& h, HermFn f);

double trace_fn(const HermitianEigen& eig, HermFn f);
// ln det sech(H), accumulated as a sum of logs.
double log_det_sech(const HermitianEigen& eig);

struct TraceDet {
  cplx trace;
  cplx det;
};
TraceDet trace_and_det(const CMatrix& m);

double symmetry_defect(const CMatrix& a);
bool all_finite(const CMatrix& a);

} // namespace sqz
