#include "sqz/ws.hpp"

#include <algorithm>
#include <cmath>

#include "sqz/schmidt.hpp"

namespace sqz {

namespace {

// Midpoint points per axis for the in-band spectral integral of a model.
constexpr int band_check_points = 800;

WsDecomposition finish(CMatrix samples, double tau, int n_min, cplx beta, const WsOptions& opt) {
  const Eigen::Index m = samples.rows();
  if (m == 0) throw Error(ErrorKind::Validation, "ws: no sample points inside the window");
  if (opt.band >= 0)
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (std::abs(i - j) > opt.band) samples(i, j) = 0.0;
  // Trim rows whose mass is negligible, keeping the index range contiguous.
  const RVector mass = samples.cwiseAbs2().rowwise().sum();
  const double cut = opt.row_floor * mass.maxCoeff();
  Eigen::Index lo = 0, hi = m - 1;
  while (lo < hi && mass(lo) < cut) ++lo;
  while (hi > lo && mass(hi) < cut) --hi;
  const Eigen::Index k = hi - lo + 1;
  CMatrix kept = samples.block(lo, lo, k, k);
  kept = (0.5 * (kept + kept.transpose())).eval();
  WsDecomposition ws = ws_from_samples(kept, tau, n_min + static_cast<int>(lo), beta);
  return ws;
}

int first_index(double tau, double half_window) { return -static_cast<int>(std::floor(half_window / tau + 1e-9)); }

} // namespace

double out_of_band_mass(const AmplitudeGrid& g, double omega) {
  const SpectralGrid s = to_frequency(g);
  double out = 0.0, total = 0.0;
  const double edge = 0.5 * omega * (1.0 + 1e-12);
  for (int b = 0; b < s.n; ++b)
    for (int a = 0; a < s.n; ++a) {
      const double w = std::norm(s.values(a, b));
      total += w;
      if (std::abs(s.freq(a)) > edge || std::abs(s.freq(b)) > edge) out += w;
    }
  return total > 0.0 ? out / total : 0.0;
}

double out_of_band_mass(const Model& m, double omega) {
  const double dw = omega / band_check_points;
  double in = 0.0;
  for (int b = 0; b < band_check_points; ++b) {
    const double w2 = -0.5 * omega + (b + 0.5) * dw;
    for (int a = 0; a < band_check_points; ++a) in += std::norm(gamma_freq(m, -0.5 * omega + (a + 0.5) * dw, w2));
  }
  return std::max(0.0, 1.0 - in * dw * dw);
}

WsDecomposition ws_from_samples(const CMatrix& samples, double tau, int n_min, cplx beta) {
  if (samples.rows() != samples.cols() || samples.rows() == 0) throw Error(ErrorKind::InvalidArgument, "ws: sample matrix must be square and non-empty");
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "ws: tau must be positive");
  WsDecomposition ws;
  ws.tau = tau;
  ws.omega = 2.0 * pi / tau;
  ws.n_min = n_min;
  ws.beta = beta;
  ws.samples = samples;
  ws.beta_matrix = beta * tau * samples;
  Eigen::Index bi = 0, bj = 0;
  samples.cwiseAbs().maxCoeff(&bi, &bj);
  const cplx peak = samples(bi, bj);
  ws.beta_ring = ws.beta_matrix(bi, bj);
  ws.r = peak != 0.0 ? CMatrix(samples / peak) : CMatrix::Zero(samples.rows(), samples.cols());
  return ws;
}

WsDecomposition ws_from_beta(const CMatrix& beta_matrix, double tau, int n_min) {
  // beta = 1 and unit-scaled samples reproduce the given matrix.
  return ws_from_samples(beta_matrix / tau, tau, n_min, 1.0);
}

WsDecomposition ws_sample(const Model& m, cplx beta, const WsOptions& opt) {
  const Widths w = widths(m);
  const double omega = opt.omega.value_or(2.0 * pi * w.coherence_bandwidth);
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "ws: omega must be positive");
  const double span = opt.span.value_or(default_span(m));
  const double oob = out_of_band_mass(m, omega);
  if (oob > opt.band_tolerance)
    throw Error(ErrorKind::BandLimit, "ws: spectral mass outside the sampling band is " + std::to_string(oob));
  const double tau = 2.0 * pi / omega;
  const int n0 = first_index(tau, 0.5 * span * w.pulse_duration);
  const int count = 1 - 2 * n0;
  CMatrix s(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = i; j < count; ++j) {
      const double v = gamma_time(m, (n0 + i) * tau, (n0 + j) * tau);
      s(i, j) = v;
      s(j, i) = v;
    }
  WsDecomposition ws = finish(s, tau, n0, beta, opt);
  ws.out_of_band = oob;
  return ws;
}

WsDecomposition ws_sample(const AmplitudeGrid& g, cplx beta, const WsOptions& opt) {
  const double omega = opt.omega.value_or(2.0 * pi * grid_widths(g).coherence_bandwidth);
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "ws: omega must be positive");
  if (omega > pi / g.dt * 2.0) throw Error(ErrorKind::BandLimit, "ws: sampling band exceeds the grid Nyquist band");
  const double oob = out_of_band_mass(g, omega);
  if (oob > opt.band_tolerance)
    throw Error(ErrorKind::BandLimit, "ws: spectral mass outside the sampling band is " + std::to_string(oob));
  const double tau = 2.0 * pi / omega;
  const double first = g.t0, last = g.t0 + (g.n - 1) * g.dt;
  int lo = static_cast<int>(std::ceil(first / tau - 1e-9));
  int hi = static_cast<int>(std::floor(last / tau + 1e-9));
  if (opt.span) {
    const int n0 = first_index(tau, 0.5 * *opt.span * grid_widths(g).pulse_duration);
    lo = std::max(lo, n0);
    hi = std::min(hi, -n0);
  }
  const int count = hi - lo + 1;
  if (count <= 0) throw Error(ErrorKind::Validation, "ws: no sample points inside the grid");
  // Band-limited interpolation of the grid onto the sample points.
  RMatrix d(count, g.n);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < g.n; ++j) d(i, j) = sinc(pi * ((lo + i) * tau - g.time(j)) / g.dt);
  const CMatrix s = d * g.values * d.transpose();
  WsDecomposition ws = finish(s, tau, lo, beta, opt);
  ws.out_of_band = oob;
  return ws;
}

RMatrix ws_basis(const WsDecomposition& ws, const RVector& times) {
  RMatrix x(times.size(), ws.size());
  const double norm = 1.0 / std::sqrt(ws.tau);
  for (int n = 0; n < ws.size(); ++n)
    for (Eigen::Index j = 0; j < times.size(); ++j) x(j, n) = norm * sinc(pi * (times(j) - ws.time(n)) / ws.tau);
  return x;
}

cplx ws_reconstruct(const WsDecomposition& ws, double t1, double t2) {
  RVector t(2);
  t << t1, t2;
  const RMatrix x = ws_basis(ws, t);
  return ws.tau * (x.row(0) * ws.samples * x.row(1).transpose())(0, 0);
}

CMatrix ws_reconstruct_grid(const WsDecomposition& ws, const RVector& times) {
  const RMatrix x = ws_basis(ws, times);
  return ws.tau * (x * ws.samples * x.transpose());
}

BogoliubovFactors bogoliubov(const CMatrix& beta_matrix) {
  BogoliubovFactors bf;
  bf.polar = polar(beta_matrix);
  const HermitianEigen& pe = bf.polar.p_eigen;
  bf.sinhP = herm_fn(pe, HermFn::Sinh).value;
  bf.coshP = herm_fn(pe, HermFn::Cosh).value;
  bf.sinh2P = herm_fn(pe, HermFn::SinhSq).value;
  bf.UsinhcoshP = bf.polar.U * herm_fn(pe, HermFn::SinhCosh).value;
  bf.mu = herm_fn(bf.polar.q_eigen, HermFn::Cosh).value;
  bf.nu = herm_fn(bf.polar.q_eigen, HermFn::Sinh).value * bf.polar.U;
  bf.gamma = bf.sinh2P.diagonal().real().cwiseMax(0.0).cwiseSqrt();
  return bf;
}

CMatrix mu_series(const CMatrix& beta_matrix, int terms) {
  const CMatrix bb = beta_matrix * beta_matrix.conjugate();
  const Eigen::Index n = beta_matrix.rows();
  CMatrix power = CMatrix::Identity(n, n);
  CMatrix acc = CMatrix::Identity(n, n);
  double fact = 1.0;
  for (int k = 1; k < terms; ++k) {
    power = power * bb;
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    acc += power / fact;
  }
  return acc;
}

double ws_n_pulse(const BogoliubovFactors& bf) { return bf.sinh2P.trace().real(); }

G1Result g1_ws(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times) {
  const RMatrix x = ws_basis(ws, times);
  G1Result r;
  r.time = times;
  r.cross = x * bf.sinh2P * x.transpose();
  r.g1 = r.cross.diagonal().real();
  r.contributions = (x * bf.sinhP.transpose()).cwiseAbs2();
  r.n_pulse = ws_n_pulse(bf);
  return r;
}

G2Result g2_ws(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times) {
  const RMatrix x = ws_basis(ws, times);
  const CMatrix cross = x * bf.sinh2P * x.transpose();
  const RVector g1 = cross.diagonal().real();
  G2Result r;
  r.time = times;
  r.coherent = (x * bf.UsinhcoshP * x.transpose()).cwiseAbs2();
  r.incoherent = g1 * g1.transpose() + cross.cwiseAbs2();
  return r;
}

std::vector<double> g2_ws_incoherent_pair_sum(const WsDecomposition& ws, const BogoliubovFactors& bf,
                                              const RVector& times, const std::vector<std::pair<int, int>>& points) {
  const CMatrix v = ws_basis(ws, times) * bf.nu;
  const Eigen::Index m = v.cols();
  std::vector<double> out;
  out.reserve(points.size());
  for (auto [j, k] : points) {
    double acc = 0.0;
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) acc += std::norm(v(j, a) * v(k, b) + v(k, a) * v(j, b));
    out.push_back(0.5 * acc);
  }
  return out;
}

Packets packets(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times) {
  if (bf.gamma.size() == 0 || bf.gamma.maxCoeff() <= 1e-12) throw Error(ErrorKind::Validation, "packets: squeezing matrix is zero");
  const CMatrix raw = ws_basis(ws, times) * bf.sinhP.transpose();
  Packets p;
  for (int n = 0; n < ws.size(); ++n) {
    if (bf.gamma(n) > 1e-12)
      p.index.push_back(n);
    else
      p.skipped.push_back(n);
  }
  p.rho.resize(times.size(), static_cast<Eigen::Index>(p.index.size()));
  p.gamma.resize(static_cast<Eigen::Index>(p.index.size()));
  for (size_t i = 0; i < p.index.size(); ++i) {
    const int n = p.index[i];
    p.gamma(static_cast<Eigen::Index>(i)) = bf.gamma(n);
    p.rho.col(static_cast<Eigen::Index>(i)) = raw.col(n) / bf.gamma(n);
  }
  return p;
}

CMatrix packet_overlaps(const BogoliubovFactors& bf, const std::vector<int>& index) {
  const Eigen::Index k = static_cast<Eigen::Index>(index.size());
  CMatrix o(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const int a = index[static_cast<size_t>(i)], b = index[static_cast<size_t>(j)];
      o(i, j) = bf.sinh2P(b, a) / (bf.gamma(a) * bf.gamma(b));
    }
  return o;
}

CohPacketForm g2_coh_packet_form(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times) {
  const HermFnResult coth = herm_fn(bf.polar.p_eigen, HermFn::Coth);
  const CMatrix c = bf.polar.U * coth.value;
  // Gamma_m rho_m(t), unnormalized packets.
  const CMatrix rg = ws_basis(ws, times) * bf.sinhP.transpose();
  CohPacketForm out;
  out.coherent = (rg * c * rg.transpose()).cwiseAbs2();
  out.dropped = coth.dropped;
  return out;
}

RMatrix g2_coh_retained(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times,
                        const std::vector<int>& dropped) {
  const HermitianEigen& pe = bf.polar.p_eigen;
  RVector f(pe.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = apply_scalar(HermFn::SinhCosh, pe.values(i));
  for (int i : dropped) f(i) = 0.0;
  const CMatrix k = bf.polar.U * pe.vectors * f.asDiagonal() * pe.vectors.adjoint();
  const RMatrix x = ws_basis(ws, times);
  return (x * k * x.transpose()).cwiseAbs2();
}

KComparison effective_vs_exact_k(const AmplitudeGrid& g, const Widths& w) {
  KComparison c;
  c.k = schmidt_number_trace(g);
  c.k_eff = w.effective_schmidt;
  c.holds = c.k <= c.k_eff * (1.0 + 1e-3);
  return c;
}

int efold_bandwidth(const CMatrix& m, int row) {
  const double ref = std::abs(m(row, row)) / std::exp(1.0);
  int k = 0;
  while (row + k + 1 < m.cols() && std::abs(m(row, row + k + 1)) >= ref) ++k;
  return k;
}

double fwhm(const RVector& times, const RVector& intensity) {
  Eigen::Index peak = 0;
  const double top = intensity.maxCoeff(&peak);
  if (!(top > 0.0)) return 0.0;
  const double half = 0.5 * top;
  auto crossing = [&](int step) {
    Eigen::Index i = peak;
    while (i + step >= 0 && i + step < intensity.size() && intensity(i + step) >= half) i += step;
    if (i + step < 0 || i + step >= intensity.size()) return times(i);
    const double a = intensity(i), b = intensity(i + step);
    return times(i) + (times(i + step) - times(i)) * (a - half) / (a - b);
  };
  return crossing(1) - crossing(-1);
}

SqueezeRegime classify_regime(double beta_ring_mag) {
  if (beta_ring_mag < 0.5) return SqueezeRegime::Weak;
  if (beta_ring_mag < 5.0) return SqueezeRegime::Intermediate;
  return SqueezeRegime::Strong;
}

const char* regime_name(SqueezeRegime r) {
  switch (r) {
  case SqueezeRegime::Weak: return "weak";
  case SqueezeRegime::Intermediate: return "intermediate";
  case SqueezeRegime::Strong: return "strong";
  }
  return "unknown";
}

} // namespace sqz
