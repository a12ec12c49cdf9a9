#include "sqz/schmidt.hpp"

#include <algorithm>
#include <cmath>

#include "sqz/matfun.hpp"

namespace sqz {

namespace {

int retained_count(const RVector& p, const Truncation& policy) {
  const int n = static_cast<int>(p.size());
  if (policy.keep_all || n == 0) return n;
  const double k = schmidt_number(p);
  double acc = 0.0;
  int by_mass = n;
  for (int i = 0; i < n; ++i) {
    acc += p(i);
    if (acc >= policy.mass) {
      by_mass = i + 1;
      break;
    }
  }
  const int by_k = static_cast<int>(std::ceil(policy.k_multiple * k));
  return std::min(n, std::max(by_mass, by_k));
}

void check_normalized(const AmplitudeGrid& g) {
  const double nrm = grid_norm(g);
  if (std::abs(nrm - 1.0) > 1e-6) throw Error(ErrorKind::Validation, "amplitude grid is not normalized");
}

} // namespace

RVector SchmidtDecomposition::times() const {
  RVector t(points());
  for (int j = 0; j < points(); ++j) t(j) = t0 + j * dt;
  return t;
}

SchmidtDecomposition schmidt_numeric(const AmplitudeGrid& grid, const Truncation& policy) {
  check_normalized(grid);
  const Takagi t = takagi(grid.dt * grid.values);
  const RVector p = t.values.cwiseAbs2();
  const int m = retained_count(p, policy);
  SchmidtDecomposition d;
  d.dt = grid.dt;
  d.t0 = grid.t0;
  d.weights = p.head(m);
  d.modes = t.vectors.leftCols(m) / std::sqrt(grid.dt);
  return d;
}

RVector dg_weights(const DoubleGaussian& g, int n_modes) {
  const double xi = (g.sigma_c - g.sigma_p) / (g.sigma_c + g.sigma_p);
  const double p0 = 4.0 * g.sigma_c * g.sigma_p / ((g.sigma_c + g.sigma_p) * (g.sigma_c + g.sigma_p));
  RVector p(n_modes);
  double r = 1.0;
  for (int k = 0; k < n_modes; ++k) {
    p(k) = p0 * r;
    r *= xi * xi;
  }
  return p;
}

double dg_schmidt_number(const DoubleGaussian& g) {
  return (g.sigma_c * g.sigma_c + g.sigma_p * g.sigma_p) / (2.0 * g.sigma_c * g.sigma_p);
}

SchmidtDecomposition schmidt_analytic_dg(const DoubleGaussian& model, const AmplitudeGrid& grid, int n_modes,
                                         const Truncation& policy) {
  const double xi = (model.sigma_c - model.sigma_p) / (model.sigma_c + model.sigma_p);
  const double tail = 1.0 - policy.mass;
  if (n_modes <= 0) {
    int by_mass = 1;
    if (xi > 0.0) by_mass = std::max(1, static_cast<int>(std::ceil(std::log(tail) / (2.0 * std::log(xi)))));
    const int by_k = static_cast<int>(std::ceil(policy.k_multiple * dg_schmidt_number(model)));
    n_modes = std::max(by_mass, by_k);
  } else if (std::pow(xi, 2.0 * n_modes) > tail * (1.0 + 1e-9)) {
    throw Error(ErrorKind::InvalidArgument, "schmidt_analytic_dg: too few modes for the requested mass");
  }
  const double tscale = 1.0 / std::sqrt(model.sigma_p * model.sigma_c);
  SchmidtDecomposition d;
  d.dt = grid.dt;
  d.t0 = grid.t0;
  d.weights = dg_weights(model, n_modes);
  d.modes.resize(grid.n, n_modes);
  const double norm0 = std::pow(pi, -0.25) / std::sqrt(tscale);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.time(j) / tscale;
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * x * x);
    for (int k = 0; k < n_modes; ++k) {
      d.modes(j, k) = cur;
      const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  canonical_sign(d.modes);
  return d;
}

SpectralModes modes_frequency(const SchmidtDecomposition& dec) {
  const int n = dec.points();
  SpectralModes s;
  s.dw = 2.0 * pi / (n * dec.dt);
  s.w0 = -(n / 2) * s.dw;
  s.modes = std::sqrt(dec.dt / s.dw) * (fourier_matrix(n, dec.dt, dec.t0) * dec.modes);
  return s;
}

double schmidt_number(const RVector& weights) {
  if (weights.size() == 0) throw Error(ErrorKind::InvalidArgument, "schmidt_number: empty weights");
  return 1.0 / weights.squaredNorm();
}

double schmidt_number_trace(const AmplitudeGrid& grid) {
  if (grid.values.imag().cwiseAbs().maxCoeff() == 0.0) {
    const RMatrix a = grid.dt * grid.values.real();
    const RMatrix m = a * a.transpose();
    return 1.0 / m.squaredNorm();
  }
  const CMatrix a = grid.dt * grid.values;
  const CMatrix m = a * a.adjoint();
  return 1.0 / m.squaredNorm();
}

SqueezeParams squeeze_params(const SchmidtDecomposition& dec, cplx beta) {
  SqueezeParams sq;
  sq.beta_mag = std::abs(beta);
  sq.theta = std::arg(beta);
  if (sq.theta < 0.0) sq.theta += 2.0 * pi;
  sq.beta_n = sq.beta_mag * dec.weights.cwiseSqrt();
  sq.s = sq.beta_n.array().sinh();
  sq.c = sq.beta_n.array().cosh();
  return sq;
}

namespace {
void check_modes(const SchmidtDecomposition& dec, const SqueezeParams& sq) {
  if (sq.s.size() != dec.size()) throw Error(ErrorKind::InvalidArgument, "squeeze parameters and decomposition differ in mode count");
}
} // namespace

G1Result g1_schmidt(const SchmidtDecomposition& dec, const SqueezeParams& sq) {
  check_modes(dec, sq);
  const RVector s2 = sq.s.cwiseAbs2();
  G1Result r;
  r.time = dec.times();
  r.cross = dec.modes.conjugate() * s2.asDiagonal() * dec.modes.transpose();
  r.contributions = dec.modes.cwiseAbs2() * s2.asDiagonal();
  r.g1 = r.contributions.rowwise().sum();
  r.n_pulse = s2.sum();
  return r;
}

G2Result g2_schmidt(const SchmidtDecomposition& dec, const SqueezeParams& sq) {
  check_modes(dec, sq);
  const G1Result g1 = g1_schmidt(dec, sq);
  const RVector sc = sq.s.cwiseProduct(sq.c);
  const CMatrix amp = dec.modes * sc.asDiagonal() * dec.modes.transpose();
  G2Result r;
  r.time = g1.time;
  r.coherent = amp.cwiseAbs2();
  r.incoherent = g1.g1 * g1.g1.transpose() + g1.cross.cwiseAbs2();
  return r;
}

std::vector<double> g2_incoherent_pair_sum(const SchmidtDecomposition& dec, const SqueezeParams& sq,
                                           const std::vector<std::pair<int, int>>& points) {
  check_modes(dec, sq);
  const int m = dec.size();
  const RVector s2 = sq.s.cwiseAbs2();
  std::vector<double> out;
  out.reserve(points.size());
  for (auto [j, k] : points) {
    double acc = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const cplx v = dec.modes(j, a) * dec.modes(k, b) + dec.modes(k, a) * dec.modes(j, b);
        acc += s2(a) * s2(b) * std::norm(v);
      }
    out.push_back(0.5 * acc);
  }
  return out;
}

TwoPhotonG two_photon_g(const SchmidtDecomposition& dec) {
  TwoPhotonG r;
  r.g1 = 2.0 * (dec.modes.cwiseAbs2() * dec.weights);
  const RVector root = dec.weights.cwiseSqrt();
  r.g2 = 2.0 * (dec.modes * root.asDiagonal() * dec.modes.transpose()).cwiseAbs2();
  return r;
}

StrongSqueezeReport strong_squeeze_report(const SchmidtDecomposition& dec, const SqueezeParams& sq) {
  check_modes(dec, sq);
  StrongSqueezeReport r;
  const G1Result g1 = g1_schmidt(dec, sq);
  if (g1.n_pulse == 0.0) return r;
  const double s0 = sq.s(0) * sq.s(0);
  r.dominance = s0 / g1.n_pulse;
  const RVector f0 = dec.modes.col(0).cwiseAbs2();
  r.g1_single_mode_distance = relative_l2(RVector(s0 * f0), g1.g1);
  const G2Result g2 = g2_schmidt(dec, sq);
  const RMatrix single = 3.0 * g1.n_pulse * g1.n_pulse * (f0 * f0.transpose());
  r.g2_single_mode_distance = relative_l2(single, g2.total());
  return r;
}

} // namespace sqz
