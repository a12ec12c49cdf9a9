#include "sqz/correlation.hpp"

#include <cmath>

namespace sqz {

double relative_l2(const RMatrix& a, const RMatrix& b, double support) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::InvalidArgument, "relative_l2: shape mismatch");
  const double cut = support * b.cwiseAbs().maxCoeff();
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      if (std::abs(b(i, j)) < cut) continue;
      const double d = a(i, j) - b(i, j);
      num += d * d;
      den += b(i, j) * b(i, j);
    }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

double relative_l2(const RVector& a, const RVector& b, double support) {
  return relative_l2(RMatrix(a), RMatrix(b), support);
}

} // namespace sqz
