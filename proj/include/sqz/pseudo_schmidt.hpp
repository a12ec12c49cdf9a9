#pragma once

#include <vector>

#include "sqz/correlation.hpp"
#include "sqz/jsa.hpp"
#include "sqz/schmidt.hpp"

namespace sqz {

// Shifted-sinc approximation to the sinc-hat amplitude: N odd modes
// eta_n(t) = sinc(pi (t - n T_c) / T_c) / sqrt(T_c), |n| <= (N-1)/2, all with
// weight 1/N.
struct PseudoSchmidt {
  int n_modes = 1;
  double tc = 1.0;
  double tp = 1.0;
  // false when T_p/T_c < 8, outside the long-pulse regime.
  bool valid = true;

  int half() const { return (n_modes - 1) / 2; }
  double weight() const { return 1.0 / n_modes; }
};

int nearest_odd(double x);
PseudoSchmidt build_pseudo_schmidt(const SincHat& model);

double eta_bar(const PseudoSchmidt& ps, int n, double t);

double approx_amplitude_time(const PseudoSchmidt& ps, double t1, double t2);
// (T_c^2 / 2 pi) u(w1 + w2) s(w1) s(w2)
double approx_amplitude_freq(const PseudoSchmidt& ps, double w1, double w2);
// Periodic envelope u(w) = sum_n e^{i w n T_c} / (T_c sqrt(N)), real for symmetric n.
double u_hat(const PseudoSchmidt& ps, double w);
// Top-hat of width 2 pi / T_c, 1/2 on the edge.
double s_window(const PseudoSchmidt& ps, double w);

// Modes sampled on the time points of an existing grid, packaged so the
// Schmidt-representation correlation code applies unchanged.
SchmidtDecomposition pseudo_decomposition(const PseudoSchmidt& ps, int n, double dt, double t0);

double pseudo_n_mode(const PseudoSchmidt& ps, double beta_mag);
double pseudo_n_pulse(const PseudoSchmidt& ps, double beta_mag);

G1Result g1_pseudo(const PseudoSchmidt& ps, double beta_mag, int n, double dt, double t0);
G2Result g2_pseudo(const PseudoSchmidt& ps, double beta_mag, int n, double dt, double t0);

struct G2Point {
  double coherent = 0.0;
  double incoherent = 0.0;
  double total() const { return coherent + incoherent; }
};

// Direct evaluation at a single pair of times.
G2Point g2_pseudo_point(const PseudoSchmidt& ps, double beta_mag, double t1, double t2);

// CW-limit closed form; x = |beta| / sqrt(N).
G2Point g2_cw_analytic(double tc, double x, double delta_t);
double g1_cw_analytic(double tc, double x);

struct ModeCounts {
  double pairs = 0.0;
  double coincidences = 0.0;
};

// <n(n-1)> = 3 N^2 + N for one squeezed mode, and that times the mode count.
ModeCounts mode_by_mode_counts(double n_mode, int modes);

struct ProlateSpectrum {
  RVector values;
  int plateau = 0;
};

// Eigenvalues of the band-limiting kernel restricted to [-T_p/2, T_p/2].
ProlateSpectrum prolate_degeneracy_check(const SincHat& model, int n_eval);

} // namespace sqz
