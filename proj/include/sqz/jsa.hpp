#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "sqz/types.hpp"

namespace sqz {

inline const double default_width_factor = 2.0 * std::sqrt(2.0 * pi);

struct DoubleGaussian {
  double sigma_p = 1.0;
  double sigma_c = 50.0;
  double a = default_width_factor;
};

struct SincHat {
  double tp = 24.0;
  double tc = 1.0;
};

using Model = std::variant<DoubleGaussian, SincHat>;

DoubleGaussian make_double_gaussian(double sigma_p, double sigma_c, double a = default_width_factor);
SincHat make_sinc_hat(double tp, double tc);

// Effective pulse duration, coherence bandwidth, coherence time and the
// effective Schmidt number built from them.
struct Widths {
  double pulse_duration = 0.0;
  double coherence_bandwidth = 0.0;
  double coherence_time = 0.0;
  double effective_schmidt = 0.0;
};

Widths widths(const Model& m);

double gamma_time(const Model& m, double t1, double t2);
cplx gamma_freq(const Model& m, double w1, double w2);

// max |gamma(t1,t2)| * sqrt(T_p T_c); of order unity for well-behaved models.
double gamma_max_scaling(const Model& m);

// Uniformly sampled symmetric joint temporal amplitude:
// values(j, k) = gamma(t0 + j dt, t0 + k dt), normalized so dt^2 sum |.|^2 = 1.
struct AmplitudeGrid {
  int n = 0;
  double dt = 0.0;
  double t0 = 0.0;
  std::string unit;
  CMatrix values;

  double time(int j) const { return t0 + j * dt; }
  RVector times() const;
};

inline constexpr int default_grid_points = 512;
inline constexpr double default_span_factor = 1.25;
// Sinc-hat tails fall off like 1/t; a narrow window biases K low by ~1%.
inline constexpr double default_span_factor_sinc_hat = 3.5;

double default_span(const Model& m);

AmplitudeGrid discretize(const Model& m, int n, double span_factor);
inline AmplitudeGrid discretize(const Model& m, int n = default_grid_points) { return discretize(m, n, default_span(m)); }

void normalize(AmplitudeGrid& g);
double grid_norm(const AmplitudeGrid& g);

// Symmetrizes and, unless told otherwise, renormalizes what it reads.
AmplitudeGrid read_grid(std::istream& in, bool renormalize = true);
AmplitudeGrid read_grid_file(const std::string& path, bool renormalize = true);
void write_grid(const AmplitudeGrid& g, std::ostream& out);

// Frequency grid with w_a = w0 + a dw, dw = 2 pi / (n dt), w0 = -(n/2) dw.
struct SpectralGrid {
  int n = 0;
  double dw = 0.0;
  double w0 = 0.0;
  CMatrix values;

  double freq(int a) const { return w0 + a * dw; }
};

// Unitary discrete transform matching gamma(w) = int dt1 dt2/(2 pi) gamma(t) e^{i(w1 t1 + w2 t2)}.
CMatrix fourier_matrix(int n, double dt, double t0);
SpectralGrid to_frequency(const AmplitudeGrid& g);
AmplitudeGrid to_time(const SpectralGrid& s, double dt, double t0);

// Width estimates for sampled amplitudes: smallest window around the
// centroid holding 99.99% of the marginal mass.
Widths grid_widths(const AmplitudeGrid& g);

} // namespace sqz
