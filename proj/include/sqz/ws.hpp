#pragma once

#include <optional>
#include <vector>

#include "sqz/correlation.hpp"
#include "sqz/jsa.hpp"
#include "sqz/matfun.hpp"

namespace sqz {

struct WsOptions {
  // Sampling bandwidth; empty means 2 pi B_c.
  std::optional<double> omega;
  // Largest tolerated spectral mass outside [-omega/2, omega/2]^2.
  double band_tolerance = 1e-3;
  // Sample times are confined to span * T_p around the origin.
  std::optional<double> span;
  // Rows whose mass falls below this fraction of the largest are trimmed.
  double row_floor = 1e-12;
  // Keep |n - m| <= band only; negative means dense.
  int band = -1;
};

// beta_nm = beta tau gamma(n tau, m tau) for n, m in [n_min, n_min + size).
struct WsDecomposition {
  double tau = 0.0;
  double omega = 0.0;
  int n_min = 0;
  cplx beta;
  CMatrix samples;
  CMatrix beta_matrix;
  cplx beta_ring;
  CMatrix r;
  double out_of_band = 0.0;

  int size() const { return static_cast<int>(beta_matrix.rows()); }
  int n_max() const { return n_min + size() - 1; }
  double time(int i) const { return (n_min + i) * tau; }
};

double out_of_band_mass(const AmplitudeGrid& g, double omega);
double out_of_band_mass(const Model& m, double omega);

WsDecomposition ws_sample(const Model& m, cplx beta, const WsOptions& opt = {});
WsDecomposition ws_sample(const AmplitudeGrid& g, cplx beta, const WsOptions& opt = {});
// Samples given directly (already tau-spaced); used for synthetic checks.
WsDecomposition ws_from_samples(const CMatrix& samples, double tau, int n_min, cplx beta);
WsDecomposition ws_from_beta(const CMatrix& beta_matrix, double tau, int n_min = 0);

// chi_n(t) = sinc(pi (t - n tau) / tau) / sqrt(tau); rows are times, columns modes.
RMatrix ws_basis(const WsDecomposition& ws, const RVector& times);
cplx ws_reconstruct(const WsDecomposition& ws, double t1, double t2);
CMatrix ws_reconstruct_grid(const WsDecomposition& ws, const RVector& times);

struct BogoliubovFactors {
  Polar polar;
  CMatrix sinhP;
  CMatrix coshP;
  CMatrix sinh2P;
  CMatrix UsinhcoshP;
  CMatrix mu;
  CMatrix nu;
  RVector gamma;
};

BogoliubovFactors bogoliubov(const CMatrix& beta_matrix);
inline BogoliubovFactors bogoliubov(const WsDecomposition& ws) { return bogoliubov(ws.beta_matrix); }

// mu from its defining power series, truncated after `terms` orders.
CMatrix mu_series(const CMatrix& beta_matrix, int terms);

double ws_n_pulse(const BogoliubovFactors& bf);

G1Result g1_ws(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times);
G2Result g2_ws(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times);

// Incoherent G2 from the pair sum over nu, at index pairs of `times`.
std::vector<double> g2_ws_incoherent_pair_sum(const WsDecomposition& ws, const BogoliubovFactors& bf,
                                              const RVector& times, const std::vector<std::pair<int, int>>& points);

struct Packets {
  // Columns are packets rho_n sampled at the requested times.
  CMatrix rho;
  RVector gamma;
  std::vector<int> index;
  std::vector<int> skipped;
};

Packets packets(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times);

// <rho_n, rho_k> from the orthonormality of the sinc basis.
CMatrix packet_overlaps(const BogoliubovFactors& bf, const std::vector<int>& index);

struct CohPacketForm {
  RMatrix coherent;
  std::vector<int> dropped;
};

CohPacketForm g2_coh_packet_form(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times);
// Coherent term restricted to the eigen-directions of P kept by the coth form.
RMatrix g2_coh_retained(const WsDecomposition& ws, const BogoliubovFactors& bf, const RVector& times,
                        const std::vector<int>& dropped);

struct KComparison {
  double k = 0.0;
  double k_eff = 0.0;
  bool holds = false;
};

KComparison effective_vs_exact_k(const AmplitudeGrid& g, const Widths& w);

// Steps from the diagonal at which |m(c, c+k)| first drops below |m(c, c)| / e.
int efold_bandwidth(const CMatrix& m, int row);

// Full width at half maximum of |f|^2 on a uniform grid, linear interpolation.
double fwhm(const RVector& times, const RVector& intensity);

enum class SqueezeRegime { Weak, Intermediate, Strong };
SqueezeRegime classify_regime(double beta_ring_mag);
const char* regime_name(SqueezeRegime r);

} // namespace sqz
