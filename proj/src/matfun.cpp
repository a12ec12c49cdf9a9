#include "sqz/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sqz {

namespace {

constexpr int max_sweeps = 64;
constexpr double jacobi_tol = 1e-12;

inline double conj_if(double x) { return x; }
inline cplx conj_if(cplx x) { return std::conj(x); }
inline double phase_of(double x, double g) { return x / g; }
inline cplx phase_of(cplx x, double g) { return x / g; }

template <class Scalar>
double off_norm(const Eigen::Matrix<Scalar, -1, -1>& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix. On return `a` is
// diagonal to tolerance and `v` holds the accumulated rotations.
template <class Scalar>
int jacobi(Eigen::Matrix<Scalar, -1, -1>& a, Eigen::Matrix<Scalar, -1, -1>& v) {
  using Vec = Eigen::Matrix<Scalar, -1, 1>;
  const Eigen::Index n = a.rows();
  v.setIdentity(n, n);
  const double tol = jacobi_tol * a.norm();
  Vec cp(n), cq(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm(a) <= tol) return sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          continue;
        }
        const double theta = (aqq - app) / (2.0 * g);
        double t;
        if (std::abs(theta) > 1e150)
          t = 0.5 / theta;
        else
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar ph = conj_if(phase_of(apq, g));

        cp = a.col(p);
        cq = a.col(q);
        a.col(p) = c * cp - (s * ph) * cq;
        a.col(q) = s * cp + (c * ph) * cq;
        for (Eigen::Index r = 0; r < n; ++r) {
          a(p, r) = conj_if(a(r, p));
          a(q, r) = conj_if(a(r, q));
        }
        a(p, p) = Scalar(app - t * g);
        a(q, q) = Scalar(aqq + t * g);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);

        cp = v.col(p);
        cq = v.col(q);
        v.col(p) = c * cp - (s * ph) * cq;
        v.col(q) = s * cp + (c * ph) * cq;
      }
    }
  }
  if (off_norm(a) <= tol) return max_sweeps;
  throw Error(ErrorKind::Validation, "Jacobi eigensolver did not converge in 64 sweeps");
}

std::vector<int> descending_order(const RVector& x) {
  std::vector<int> idx(static_cast<size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return x(i) > x(j); });
  return idx;
}

} // namespace

void canonical_sign(CMatrix& f) {
  for (Eigen::Index k = 0; k < f.cols(); ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < f.rows(); ++j) {
      const double m = std::abs(f(j, k));
      if (m > best * (1.0 + 1e-12)) {
        best = m;
        imax = j;
      }
    }
    const cplx z = f(imax, k);
    const bool flip = z.real() < -1e-14 * best || (std::abs(z.real()) <= 1e-14 * best && z.imag() < 0);
    if (flip) f.col(k) *= -1.0;
  }
}

namespace {

// Takagi of a small symmetric block through the real embedding
// [[X, Y], [Y, -X]], whose positive spectrum carries the Takagi values.
bool small_takagi(const CMatrix& b, CMatrix& y, RVector& s) {
  const Eigen::Index k = b.rows();
  if (k == 1) {
    const double m = std::abs(b(0, 0));
    y.resize(1, 1);
    y(0, 0) = m > 0 ? std::exp(cplx(0, 0.5 * std::arg(b(0, 0)))) : cplx(1, 0);
    s.resize(1);
    s(0) = m;
    return true;
  }
  RMatrix m(2 * k, 2 * k);
  m.topLeftCorner(k, k) = b.real();
  m.topRightCorner(k, k) = b.imag();
  m.bottomLeftCorner(k, k) = b.imag();
  m.bottomRightCorner(k, k) = -b.real();
  m = 0.5 * (m + m.transpose()).eval();
  const RealSymmetricEigen e = symmetric_eigen(m);
  y.resize(k, k);
  s.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) y(i, j) = cplx(e.vectors(i, j), e.vectors(k + i, j));
    s(j) = e.values(j);
  }
  if (s.minCoeff() < 0.0) return false;
  return (y.adjoint() * y - CMatrix::Identity(k, k)).norm() < 1e-8;
}

} // namespace

HermitianEigen hermitian_eigen(const CMatrix& h) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::InvalidArgument, "hermitian_eigen: matrix is not square");
  if (!all_finite(h)) throw Error(ErrorKind::NonFinite, "hermitian_eigen: non-finite entries");
  HermitianEigen out;
  const Eigen::Index n = h.rows();
  if (n == 0) return out;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    RealSymmetricEigen r = symmetric_eigen(h.real());
    out.values = r.values;
    out.vectors = r.vectors.cast<cplx>();
    out.sweeps = r.sweeps;
    return out;
  }
  CMatrix a = 0.5 * (h + h.adjoint());
  CMatrix v;
  out.sweeps = jacobi(a, v);
  RVector d = a.diagonal().real();
  const auto idx = descending_order(d);
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = d(idx[static_cast<size_t>(k)]);
    out.vectors.col(k) = v.col(idx[static_cast<size_t>(k)]);
  }
  return out;
}

RealSymmetricEigen symmetric_eigen(const RMatrix& in) {
  if (in.rows() != in.cols()) throw Error(ErrorKind::InvalidArgument, "symmetric_eigen: matrix is not square");
  if (!in.allFinite()) throw Error(ErrorKind::NonFinite, "symmetric_eigen: non-finite entries");
  RealSymmetricEigen out;
  const Eigen::Index n = in.rows();
  if (n == 0) return out;
  RMatrix a = 0.5 * (in + in.transpose());
  RMatrix v;
  out.sweeps = jacobi(a, v);
  RVector d = a.diagonal();
  const auto idx = descending_order(d);
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = d(idx[static_cast<size_t>(k)]);
    out.vectors.col(k) = v.col(idx[static_cast<size_t>(k)]);
  }
  return out;
}

double symmetry_defect(const CMatrix& a) {
  const double na = a.norm();
  if (na == 0.0) return 0.0;
  return (a - a.transpose()).norm() / na;
}

bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

Takagi takagi(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "takagi: matrix is not square");
  if (!all_finite(a)) throw Error(ErrorKind::NonFinite, "takagi: non-finite entries");
  if (symmetry_defect(a) > 1e-8) throw Error(ErrorKind::NotSymmetric, "takagi: matrix is not symmetric");
  const Eigen::Index n = a.rows();
  const CMatrix sym = 0.5 * (a + a.transpose());
  Takagi out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  RVector vals(n);
  CMatrix vecs(n, n);
  if (sym.imag().cwiseAbs().maxCoeff() == 0.0) {
    const RealSymmetricEigen e = symmetric_eigen(sym.real());
    for (Eigen::Index k = 0; k < n; ++k) {
      vals(k) = std::abs(e.values(k));
      const cplx ph = e.values(k) < 0.0 ? cplx(0, 1) : cplx(1, 0);
      vecs.col(k) = e.vectors.col(k).cast<cplx>() * ph;
    }
  } else {
    const HermitianEigen e = hermitian_eigen(sym.adjoint() * sym);
    RVector est = e.values.cwiseMax(0.0).cwiseSqrt();
    const double smax = est(0);
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index stop = start + 1;
      while (stop < n && est(stop - 1) - est(stop) < 1e-8 * smax) ++stop;
      const Eigen::Index k = stop - start;
      const CMatrix vc = e.vectors.middleCols(start, k);
      const CMatrix b = vc.transpose() * sym * vc;
      CMatrix y;
      RVector s;
      if (!small_takagi(0.5 * (b + b.transpose()), y, s)) {
        y = CMatrix::Identity(k, k);
        s = est.segment(start, k);
      }
      vecs.middleCols(start, k) = vc.conjugate() * y;
      vals.segment(start, k) = s;
      start = stop;
    }
  }
  const auto idx = descending_order(vals);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = vals(idx[static_cast<size_t>(k)]);
    out.vectors.col(k) = vecs.col(idx[static_cast<size_t>(k)]);
  }
  canonical_sign(out.vectors);
  return out;
}

Polar polar(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "polar: matrix is not square");
  if (!all_finite(a)) throw Error(ErrorKind::NonFinite, "polar: non-finite entries");
  const Eigen::Index n = a.rows();
  Polar out;
  if (symmetry_defect(a) <= 1e-12) {
    const Takagi t = takagi(0.5 * (a + a.transpose()));
    const CMatrix& f = t.vectors;
    out.U = f * f.transpose();
    out.P = f.conjugate() * t.values.asDiagonal() * f.transpose();
    out.Q = f * t.values.asDiagonal() * f.adjoint();
    out.p_eigen.values = t.values;
    out.p_eigen.vectors = f.conjugate();
    out.q_eigen.values = t.values;
    out.q_eigen.vectors = f;
    return out;
  }
  const HermitianEigen e = hermitian_eigen(a.adjoint() * a);
  const RVector sigma = e.values.cwiseMax(0.0).cwiseSqrt();
  const double smax = n > 0 ? sigma(0) : 0.0;
  CMatrix w = CMatrix::Zero(n, n);
  Eigen::Index filled = 0;
  auto orthogonalize = [&](CVector x) -> bool {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < filled; ++j) x -= w.col(j) * w.col(j).dot(x);
    const double nx = x.norm();
    if (nx < 1e-10) return false;
    w.col(filled++) = x / nx;
    return true;
  };
  for (Eigen::Index k = 0; k < n; ++k) {
    if (sigma(k) <= 1e-13 * smax || sigma(k) == 0.0) break;
    if (!orthogonalize(a * e.vectors.col(k) / sigma(k))) break;
  }
  for (Eigen::Index j = 0; filled < n && j < n; ++j) orthogonalize(CVector::Unit(n, j));
  out.U = w * e.vectors.adjoint();
  out.P = e.vectors * sigma.asDiagonal() * e.vectors.adjoint();
  out.Q = w * sigma.asDiagonal() * w.adjoint();
  out.p_eigen.values = sigma;
  out.p_eigen.vectors = e.vectors;
  out.q_eigen.values = sigma;
  out.q_eigen.vectors = w;
  return out;
}

double apply_scalar(HermFn f, double x) {
  switch (f) {
    case HermFn::Sinh: return std::sinh(x);
    case HermFn::Cosh: return std::cosh(x);
    case HermFn::Tanh: return std::tanh(x);
    case HermFn::Sech: return 1.0 / std::cosh(x);
    case HermFn::Csch: return 1.0 / std::sinh(x);
    case HermFn::Coth: return 1.0 / std::tanh(x);
    case HermFn::Ln:
      if (x <= 0.0) throw Error(ErrorKind::InvalidArgument, "herm_fn: logarithm of a non-positive eigenvalue");
      return std::log(x);
    case HermFn::LnSech: {
      const double ax = std::abs(x);
      return -(ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0));
    }
    case HermFn::SinhSq: {
      const double s = std::sinh(x);
      return s * s;
    }
    case HermFn::SinhCosh: return 0.5 * std::sinh(2.0 * x);
  }
  return 0.0;
}

namespace {
bool floored(HermFn f) { return f == HermFn::Csch || f == HermFn::Coth; }
} // namespace

HermFnResult herm_fn(const HermitianEigen& eig, HermFn f) {
  const Eigen::Index n = eig.values.size();
  RVector d(n);
  HermFnResult out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = eig.values(k);
    if (floored(f) && std::abs(x) < singular_floor) {
      d(k) = 0.0;
      out.dropped.push_back(static_cast<int>(k));
    } else {
      d(k) = apply_scalar(f, x);
    }
  }
  out.value = eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
  return out;
}

HermFnResult herm_fn(const CMatrix& h, HermFn f) { return herm_fn(hermitian_eigen(h), f); }

double trace_fn(const HermitianEigen& eig, HermFn f) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double x = eig.values(k);
    if (floored(f) && std::abs(x) < singular_floor) continue;
    s += apply_scalar(f, x);
  }
  return s;
}

double log_det_sech(const HermitianEigen& eig) { return trace_fn(eig, HermFn::LnSech); }

TraceDet trace_and_det(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "trace_and_det: matrix is not square");
  if (m.rows() == 0) return {cplx(0, 0), cplx(1, 0)};
  return {m.trace(), Eigen::PartialPivLU<CMatrix>(m).determinant()};
}

} // namespace sqz
