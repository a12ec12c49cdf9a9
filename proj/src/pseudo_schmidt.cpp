#include "sqz/pseudo_schmidt.hpp"

#include <cmath>

#include "sqz/matfun.hpp"

namespace sqz {

int nearest_odd(double x) {
  // Odd integers are 2k + 1; ties go to the lower one.
  const double k = std::ceil((x - 1.0) / 2.0 - 0.5);
  return static_cast<int>(2.0 * k + 1.0);
}

PseudoSchmidt build_pseudo_schmidt(const SincHat& model) {
  if (!(model.tp > 0.0) || !(model.tc > 0.0)) throw Error(ErrorKind::InvalidArgument, "pseudo-Schmidt: T_p and T_c must be positive");
  PseudoSchmidt ps;
  ps.tc = model.tc;
  ps.tp = model.tp;
  ps.n_modes = std::max(1, nearest_odd(1.0 + model.tp / model.tc));
  ps.valid = model.tp / model.tc >= 8.0;
  return ps;
}

double eta_bar(const PseudoSchmidt& ps, int n, double t) {
  return sinc(pi * (t - n * ps.tc) / ps.tc) / std::sqrt(ps.tc);
}

double approx_amplitude_time(const PseudoSchmidt& ps, double t1, double t2) {
  double acc = 0.0;
  for (int n = -ps.half(); n <= ps.half(); ++n) acc += eta_bar(ps, n, t1) * eta_bar(ps, n, t2);
  return std::sqrt(ps.weight()) * acc;
}

double u_hat(const PseudoSchmidt& ps, double w) {
  double acc = 1.0;
  for (int n = 1; n <= ps.half(); ++n) acc += 2.0 * std::cos(w * n * ps.tc);
  return acc / (ps.tc * std::sqrt(static_cast<double>(ps.n_modes)));
}

double s_window(const PseudoSchmidt& ps, double w) {
  const double edge = pi / ps.tc;
  const double d = std::abs(w) - edge;
  if (std::abs(d) <= 1e-12 * edge) return 0.5;
  return d < 0.0 ? 1.0 : 0.0;
}

double approx_amplitude_freq(const PseudoSchmidt& ps, double w1, double w2) {
  return ps.tc * ps.tc / (2.0 * pi) * u_hat(ps, w1 + w2) * s_window(ps, w1) * s_window(ps, w2);
}

SchmidtDecomposition pseudo_decomposition(const PseudoSchmidt& ps, int n, double dt, double t0) {
  SchmidtDecomposition d;
  d.dt = dt;
  d.t0 = t0;
  d.weights = RVector::Constant(ps.n_modes, ps.weight());
  d.modes.resize(n, ps.n_modes);
  for (int m = 0; m < ps.n_modes; ++m)
    for (int j = 0; j < n; ++j) d.modes(j, m) = eta_bar(ps, m - ps.half(), t0 + j * dt);
  return d;
}

double pseudo_n_mode(const PseudoSchmidt& ps, double beta_mag) {
  const double s = std::sinh(beta_mag / std::sqrt(static_cast<double>(ps.n_modes)));
  return s * s;
}

double pseudo_n_pulse(const PseudoSchmidt& ps, double beta_mag) { return ps.n_modes * pseudo_n_mode(ps, beta_mag); }

G1Result g1_pseudo(const PseudoSchmidt& ps, double beta_mag, int n, double dt, double t0) {
  const SchmidtDecomposition d = pseudo_decomposition(ps, n, dt, t0);
  return g1_schmidt(d, squeeze_params(d, beta_mag));
}

G2Result g2_pseudo(const PseudoSchmidt& ps, double beta_mag, int n, double dt, double t0) {
  const SchmidtDecomposition d = pseudo_decomposition(ps, n, dt, t0);
  return g2_schmidt(d, squeeze_params(d, beta_mag));
}

G2Point g2_pseudo_point(const PseudoSchmidt& ps, double beta_mag, double t1, double t2) {
  const double x = beta_mag / std::sqrt(static_cast<double>(ps.n_modes));
  const double s = std::sinh(x), c = std::cosh(x);
  double k11 = 0.0, k22 = 0.0, k12 = 0.0;
  for (int n = -ps.half(); n <= ps.half(); ++n) {
    const double e1 = eta_bar(ps, n, t1), e2 = eta_bar(ps, n, t2);
    k11 += e1 * e1;
    k22 += e2 * e2;
    k12 += e1 * e2;
  }
  G2Point g;
  g.coherent = s * s * c * c * k12 * k12;
  g.incoherent = std::pow(s, 4) * (k11 * k22 + k12 * k12);
  return g;
}

G2Point g2_cw_analytic(double tc, double x, double delta_t) {
  const double s2 = std::pow(std::sinh(x), 2), c2 = std::pow(std::cosh(x), 2);
  const double k = std::pow(sinc(pi * delta_t / tc), 2);
  G2Point g;
  g.coherent = s2 * c2 * k / (tc * tc);
  g.incoherent = s2 * s2 * (1.0 + k) / (tc * tc);
  return g;
}

double g1_cw_analytic(double tc, double x) { return std::pow(std::sinh(x), 2) / tc; }

ModeCounts mode_by_mode_counts(double n_mode, int modes) {
  if (!(n_mode >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mode_by_mode_counts: negative photon number");
  ModeCounts m;
  m.pairs = 3.0 * n_mode * n_mode + n_mode;
  m.coincidences = modes * m.pairs;
  return m;
}

ProlateSpectrum prolate_degeneracy_check(const SincHat& model, int n_eval) {
  const double ratio = model.tp / model.tc;
  if (n_eval < 8.0 * ratio) throw Error(ErrorKind::InvalidArgument, "prolate check: n_eval must be at least 8 T_p/T_c");
  const double dt = model.tp / n_eval;
  const double omega_c = 2.0 * pi / model.tc;
  RMatrix k(n_eval, n_eval);
  for (int i = 0; i < n_eval; ++i)
    for (int j = 0; j < n_eval; ++j) {
      // sin(W u / 2) / (pi u) = (W / 2 pi) sinc(W u / 2)
      const double u = (i - j) * dt;
      k(i, j) = dt * omega_c / (2.0 * pi) * sinc(0.5 * omega_c * u);
    }
  ProlateSpectrum out;
  out.values = symmetric_eigen(k).values;
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    if (out.values(i) > 0.5) ++out.plateau;
  return out;
}

} // namespace sqz
