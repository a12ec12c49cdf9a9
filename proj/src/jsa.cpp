#include "sqz/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "sqz/format.hpp"

namespace sqz {

namespace {

bool near_edge(double x, double edge) { return std::abs(x - edge) <= 1e-12 * std::max(1.0, std::abs(edge)); }

double top_hat(double t, double width) {
  const double at = std::abs(t);
  const double half = 0.5 * width;
  if (near_edge(at, half)) return 0.5;
  return at < half ? 1.0 : 0.0;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

DoubleGaussian make_double_gaussian(double sigma_p, double sigma_c, double a) {
  if (!(sigma_p > 0.0) || !(sigma_c >= sigma_p) || !std::isfinite(sigma_c))
    throw Error(ErrorKind::InvalidArgument, "double-Gaussian requires sigma_c >= sigma_p > 0");
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "width factor a must be positive");
  return {sigma_p, sigma_c, a};
}

SincHat make_sinc_hat(double tp, double tc) {
  if (!(tp > 0.0) || !(tc > 0.0) || !std::isfinite(tp) || !std::isfinite(tc))
    throw Error(ErrorKind::InvalidArgument, "sinc-hat requires T_p > 0 and T_c > 0");
  return {tp, tc};
}

Widths widths(const Model& m) {
  Widths w;
  std::visit(overloaded{[&](const DoubleGaussian& g) {
                          w.pulse_duration = g.a / (std::sqrt(2.0) * g.sigma_p);
                          w.coherence_bandwidth = g.a * g.sigma_c / (2.0 * pi * std::sqrt(2.0));
                        },
                        [&](const SincHat& s) {
                          w.pulse_duration = s.tp + 0.5 * s.tc;
                          w.coherence_bandwidth = 1.0 / s.tc + 0.5 / s.tp;
                        }},
             m);
  w.coherence_time = 1.0 / w.coherence_bandwidth;
  w.effective_schmidt = w.pulse_duration * w.coherence_bandwidth;
  return w;
}

double gamma_time(const Model& m, double t1, double t2) {
  return std::visit(overloaded{[&](const DoubleGaussian& g) {
                                 const double d = t1 - t2, s = t1 + t2;
                                 return std::sqrt(g.sigma_p * g.sigma_c / pi) *
                                        std::exp(-0.25 * g.sigma_c * g.sigma_c * d * d) *
                                        std::exp(-0.25 * g.sigma_p * g.sigma_p * s * s);
                               },
                               [&](const SincHat& h) {
                                 const double alpha = top_hat(0.5 * (t1 + t2), h.tp) / std::sqrt(h.tp);
                                 if (alpha == 0.0) return 0.0;
                                 return alpha * sinc(pi * (t1 - t2) / h.tc) / std::sqrt(h.tc);
                               }},
                    m);
}

cplx gamma_freq(const Model& m, double w1, double w2) {
  return std::visit(overloaded{[&](const DoubleGaussian& g) {
                                 const double d = w1 - w2, s = w1 + w2;
                                 return cplx(std::exp(-d * d / (4.0 * g.sigma_c * g.sigma_c)) *
                                                 std::exp(-s * s / (4.0 * g.sigma_p * g.sigma_p)) /
                                                 std::sqrt(pi * g.sigma_p * g.sigma_c),
                                             0.0);
                               },
                               [&](const SincHat& h) {
                                 const double omega_c = 2.0 * pi / h.tc;
                                 const double box = top_hat(w1 - w2, 2.0 * omega_c);
                                 return cplx(std::sqrt(h.tp * h.tc) / (2.0 * pi) * sinc(0.5 * (w1 + w2) * h.tp) * box,
                                             0.0);
                               }},
                    m);
}

double gamma_max_scaling(const Model& m) {
  const Widths w = widths(m);
  const double peak = std::visit(overloaded{[](const DoubleGaussian& g) { return std::sqrt(g.sigma_p * g.sigma_c / pi); },
                                            [](const SincHat& h) { return 1.0 / std::sqrt(h.tp * h.tc); }},
                                 m);
  return peak * std::sqrt(w.pulse_duration * w.coherence_time);
}

RVector AmplitudeGrid::times() const {
  RVector t(n);
  for (int j = 0; j < n; ++j) t(j) = time(j);
  return t;
}

double grid_norm(const AmplitudeGrid& g) { return g.dt * g.values.norm(); }

void normalize(AmplitudeGrid& g) {
  const double nrm = grid_norm(g);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error(ErrorKind::Validation, "amplitude grid has zero or non-finite norm");
  g.values /= nrm;
}

double default_span(const Model& m) {
  return std::holds_alternative<SincHat>(m) ? default_span_factor_sinc_hat : default_span_factor;
}

AmplitudeGrid discretize(const Model& m, int n, double span_factor) {
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "discretize: grid size must be at least 16");
  if (!(span_factor >= 1.0)) throw Error(ErrorKind::InvalidArgument, "discretize: span factor must be at least 1");
  const double span = span_factor * widths(m).pulse_duration;
  AmplitudeGrid g;
  g.n = n;
  g.dt = span / n;
  g.t0 = -0.5 * span + 0.5 * g.dt;
  g.values.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = k; j < n; ++j) {
      const double v = gamma_time(m, g.time(j), g.time(k));
      g.values(j, k) = v;
      g.values(k, j) = v;
    }
  normalize(g);
  return g;
}

AmplitudeGrid read_grid(std::istream& in, bool renormalize) {
  auto fail = [](const std::string& msg) { return Error(ErrorKind::Format, "JTA v1: " + msg); };
  std::string line;
  if (!std::getline(in, line)) throw fail("empty input");
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  if (line != "JTA v1") throw fail("missing 'JTA v1' header");
  if (!std::getline(in, line)) throw fail("missing size line");
  std::istringstream hs(line);
  std::string key, val;
  AmplitudeGrid g;
  bool have_n = false, have_dt = false, have_t0 = false;
  while (hs >> key) {
    if (!(hs >> val)) throw fail("key '" + key + "' has no value");
    double x = 0.0;
    if (key == "unit") {
      g.unit = val;
      continue;
    }
    if (!parse_double(val, x)) throw fail("bad number for '" + key + "'");
    if (key == "n") {
      if (x != std::floor(x) || x < 1 || x > 1e5) throw fail("bad grid size");
      g.n = static_cast<int>(x);
      have_n = true;
    } else if (key == "dt") {
      if (!(x > 0.0)) throw fail("dt must be positive");
      g.dt = x;
      have_dt = true;
    } else if (key == "t0") {
      g.t0 = x;
      have_t0 = true;
    } else {
      throw fail("unknown header key '" + key + "'");
    }
  }
  if (!have_n || !have_dt || !have_t0) throw fail("size line needs n, dt and t0");
  const long long total = static_cast<long long>(g.n) * g.n;
  g.values.resize(g.n, g.n);
  long long count = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (count >= total) throw fail("more value rows than n*n = " + std::to_string(total));
    std::istringstream ls(line);
    std::string re, im, extra;
    double x = 0.0, y = 0.0;
    if (!(ls >> re >> im) || (ls >> extra) || !parse_double(re, x) || !parse_double(im, y))
      throw fail("malformed value row " + std::to_string(count + 1));
    g.values(count / g.n, count % g.n) = cplx(x, y);
    ++count;
  }
  if (count != total)
    throw fail("expected " + std::to_string(total) + " value rows, found " + std::to_string(count));
  if (!std::isfinite(g.values.norm())) throw Error(ErrorKind::NonFinite, "JTA v1: non-finite amplitude values");
  const double peak = g.values.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw Error(ErrorKind::Validation, "JTA v1: amplitude is identically zero");
  const double asym = (g.values - g.values.transpose()).cwiseAbs().maxCoeff() / peak;
  if (asym > 1e-6)
    throw Error(ErrorKind::NotSymmetric, "JTA v1: amplitude is not symmetric (relative asymmetry " + format_double(asym) + ")");
  g.values = (0.5 * (g.values + g.values.transpose())).eval();
  if (renormalize) normalize(g);
  return g;
}

AmplitudeGrid read_grid_file(const std::string& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open grid file " + path);
  return read_grid(in, renormalize);
}

void write_grid(const AmplitudeGrid& g, std::ostream& out) {
  out << "JTA v1\n";
  out << "n " << g.n << " dt " << format_double17(g.dt) << " t0 " << format_double17(g.t0);
  if (!g.unit.empty()) out << " unit " << g.unit;
  out << '\n';
  std::string row;
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k) {
      row = format_double17(g.values(j, k).real());
      row += ' ';
      row += format_double17(g.values(j, k).imag());
      row += '\n';
      out << row;
    }
}

CMatrix fourier_matrix(int n, double dt, double t0) {
  const double dw = 2.0 * pi / (n * dt);
  const double w0 = -(n / 2) * dw;
  CMatrix w(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) {
      const double phase = (w0 + a * dw) * (t0 + j * dt);
      w(a, j) = scale * cplx(std::cos(phase), std::sin(phase));
    }
  return w;
}

SpectralGrid to_frequency(const AmplitudeGrid& g) {
  const CMatrix w = fourier_matrix(g.n, g.dt, g.t0);
  SpectralGrid s;
  s.n = g.n;
  s.dw = 2.0 * pi / (g.n * g.dt);
  s.w0 = -(g.n / 2) * s.dw;
  s.values = (g.dt / s.dw) * (w * g.values * w.transpose());
  return s;
}

AmplitudeGrid to_time(const SpectralGrid& s, double dt, double t0) {
  const CMatrix w = fourier_matrix(s.n, dt, t0);
  AmplitudeGrid g;
  g.n = s.n;
  g.dt = dt;
  g.t0 = t0;
  g.values = (s.dw / dt) * (w.adjoint() * s.values * w.conjugate());
  return g;
}

namespace {

double support_width(const RVector& axis, const RVector& mass, double step) {
  const double total = mass.sum();
  if (!(total > 0.0)) throw Error(ErrorKind::Validation, "width estimate: grid carries no mass");
  const double centre = axis.dot(mass) / total;
  std::vector<int> idx(static_cast<size_t>(axis.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(axis(a) - centre) < std::abs(axis(b) - centre); });
  double acc = 0.0, half = 0.0;
  for (int i : idx) {
    acc += mass(i);
    half = std::abs(axis(i) - centre);
    if (acc >= 0.9999 * total) break;
  }
  return 2.0 * half + step;
}

} // namespace

Widths grid_widths(const AmplitudeGrid& g) {
  const RVector tmass = g.values.cwiseAbs2().rowwise().sum();
  Widths w;
  w.pulse_duration = support_width(g.times(), tmass, g.dt);
  const SpectralGrid s = to_frequency(g);
  RVector freqs(s.n);
  for (int a = 0; a < s.n; ++a) freqs(a) = s.freq(a);
  const RVector wmass = s.values.cwiseAbs2().rowwise().sum();
  w.coherence_bandwidth = support_width(freqs, wmass, s.dw) / (2.0 * pi);
  w.coherence_time = 1.0 / w.coherence_bandwidth;
  w.effective_schmidt = w.pulse_duration * w.coherence_bandwidth;
  return w;
}

} // namespace sqz
