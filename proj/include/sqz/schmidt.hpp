#pragma once

#include <vector>

#include "sqz/correlation.hpp"
#include "sqz/jsa.hpp"

namespace sqz {

// gamma(t1, t2) = sum_n sqrt(p_n) f_n(t1) f_n(t2) on the grid of the source.
struct SchmidtDecomposition {
  RVector weights;
  CMatrix modes;
  double dt = 0.0;
  double t0 = 0.0;

  int size() const { return static_cast<int>(weights.size()); }
  int points() const { return static_cast<int>(modes.rows()); }
  RVector times() const;
};

struct Truncation {
  double mass = 1.0 - 1e-8;
  double k_multiple = 4.0;
  bool keep_all = false;
};

SchmidtDecomposition schmidt_numeric(const AmplitudeGrid& grid, const Truncation& policy = {});

// Hermite-function modes sampled on the points of `grid`. With n_modes = 0
// the count follows the truncation policy.
SchmidtDecomposition schmidt_analytic_dg(const DoubleGaussian& model, const AmplitudeGrid& grid, int n_modes = 0,
                                         const Truncation& policy = {});

RVector dg_weights(const DoubleGaussian& model, int n_modes);
double dg_schmidt_number(const DoubleGaussian& model);

struct SpectralModes {
  double dw = 0.0;
  double w0 = 0.0;
  CMatrix modes;
};

SpectralModes modes_frequency(const SchmidtDecomposition& dec);

double schmidt_number(const RVector& weights);
double schmidt_number_trace(const AmplitudeGrid& grid);

struct SqueezeParams {
  double beta_mag = 0.0;
  double theta = 0.0;
  RVector beta_n;
  RVector s;
  RVector c;
};

SqueezeParams squeeze_params(const SchmidtDecomposition& dec, cplx beta);

G1Result g1_schmidt(const SchmidtDecomposition& dec, const SqueezeParams& sq);
G2Result g2_schmidt(const SchmidtDecomposition& dec, const SqueezeParams& sq);

// The defining double sum of the incoherent term, evaluated at grid index
// pairs (j, k).
std::vector<double> g2_incoherent_pair_sum(const SchmidtDecomposition& dec, const SqueezeParams& sq,
                                           const std::vector<std::pair<int, int>>& points);

struct TwoPhotonG {
  RVector g1;
  RMatrix g2;
};

TwoPhotonG two_photon_g(const SchmidtDecomposition& dec);

struct StrongSqueezeReport {
  double dominance = 0.0;
  double g1_single_mode_distance = 0.0;
  double g2_single_mode_distance = 0.0;
};

StrongSqueezeReport strong_squeeze_report(const SchmidtDecomposition& dec, const SqueezeParams& sq);

} // namespace sqz
