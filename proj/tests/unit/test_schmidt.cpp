#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sqz/matfun.hpp"
#include "sqz/schmidt.hpp"

using namespace sqz;

namespace {

// gamma = f(t1) f(t2) with a normalized Gaussian f: a single mode.
AmplitudeGrid rank_one_grid(int n) {
  AmplitudeGrid g;
  g.n = n;
  g.dt = 10.0 / n;
  g.t0 = -5.0 + 0.5 * g.dt;
  RVector f(n);
  for (int j = 0; j < n; ++j) f(j) = std::exp(-g.time(j) * g.time(j));
  g.values = (f * f.transpose()).cast<cplx>();
  normalize(g);
  return g;
}

} // namespace

TEST_SUITE("schmidt") {

TEST_CASE("rank-one amplitude has a single mode") {
  const AmplitudeGrid g = rank_one_grid(64);
  const SchmidtDecomposition d = schmidt_numeric(g, Truncation{.keep_all = true});
  CHECK(d.weights(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d.weights.tail(d.size() - 1).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(schmidt_number(d.weights) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(schmidt_number_trace(g) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("analytic double-Gaussian weights") {
  const DoubleGaussian m = make_double_gaussian(1.0, 50.0);
  const RVector p = dg_weights(m, 3);
  CHECK(p(0) == doctest::Approx(200.0 / 2601.0).epsilon(1e-14));
  CHECK(p(1) / p(0) == doctest::Approx(std::pow(49.0 / 51.0, 2)).epsilon(1e-14));
  CHECK(dg_schmidt_number(m) == doctest::Approx(25.01).epsilon(1e-14));
  CHECK(schmidt_number(dg_weights(m, 2000)) == doctest::Approx(25.01).epsilon(1e-10));
  CHECK(dg_schmidt_number(make_double_gaussian(2.0, 2.0)) == doctest::Approx(1.0));
  const RVector one = dg_weights(make_double_gaussian(2.0, 2.0), 3);
  CHECK(one(0) == doctest::Approx(1.0));
  CHECK(one(1) == 0.0);
}

TEST_CASE("analytic double-Gaussian modes reconstruct the grid") {
  // Wide, fine window: every retained Hermite function fits and is resolved.
  const DoubleGaussian m = make_double_gaussian(1.0, 10.0);
  const AmplitudeGrid g = discretize(m, 384, 2.0);
  const SchmidtDecomposition d = schmidt_analytic_dg(m, g);
  CHECK(d.weights.sum() >= 1.0 - 1e-8);
  const CMatrix gram = g.dt * d.modes.adjoint() * d.modes;
  CHECK((gram - CMatrix::Identity(d.size(), d.size())).cwiseAbs().maxCoeff() < 1e-7);
  // The default count drops a tail of mass 1e-8; 80 modes leave ~1e-14.
  const SchmidtDecomposition all = schmidt_analytic_dg(m, g, 80);
  const CMatrix recon = all.modes * all.weights.cwiseSqrt().asDiagonal() * all.modes.transpose();
  CHECK((recon - g.values).norm() < 1e-6 * g.values.norm());
  CHECK_THROWS_AS(schmidt_analytic_dg(m, g, 10), Error);
  const SchmidtDecomposition n = schmidt_numeric(g);
  CHECK((n.weights.head(20) - d.weights.head(20)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("numeric decomposition of the default double-Gaussian") {
  const auto& fx = fixture::double_gaussian();
  const SchmidtDecomposition& d = fx.dec;
  CHECK(d.weights.sum() == doctest::Approx(1.0).epsilon(1e-8));
  const CMatrix gram = fx.grid.dt * d.modes.adjoint() * d.modes;
  CHECK((gram - CMatrix::Identity(d.size(), d.size())).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(schmidt_number(d.weights) - 25.01) / 25.01 < 1e-3);
  CHECK(std::abs(schmidt_number_trace(fx.grid) - schmidt_number(d.weights)) < 1e-6 * schmidt_number(d.weights));
  const RVector exact = dg_weights(std::get<DoubleGaussian>(fx.model), 20);
  CHECK((d.weights.head(20) - exact).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("weights are the eigenvalues of the reduced operator") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 5.0), 128);
  const SchmidtDecomposition d = schmidt_numeric(g, Truncation{.keep_all = true});
  const CMatrix a = g.dt * g.values;
  const HermitianEigen e = hermitian_eigen(a * a.adjoint());
  CHECK((e.values - d.weights).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Schmidt number examples") {
  RVector p(1);
  p << 1.0;
  CHECK(schmidt_number(p) == 1.0);
  RVector q = RVector::Constant(4, 0.25);
  CHECK(schmidt_number(q) == doctest::Approx(4.0));
  CHECK_THROWS_AS(schmidt_number(RVector()), Error);
}

TEST_CASE("squeezing parameters satisfy c^2 - s^2 = 1") {
  const auto& fx = fixture::double_gaussian();
  for (double b : {0.1, 1.0, 10.0}) {
    const SqueezeParams sq = squeeze_params(fx.dec, cplx(b, 0.0));
    for (int n = 0; n < fx.dec.size(); ++n) CHECK(std::abs(sq.c(n) * sq.c(n) - sq.s(n) * sq.s(n) - 1.0) < 1e-12);
  }
  const SqueezeParams neg = squeeze_params(fx.dec, std::polar(2.0, -0.5));
  CHECK(neg.theta == doctest::Approx(2.0 * pi - 0.5));
}

TEST_CASE("first-order correlation properties") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 10.0), 160);
  const SchmidtDecomposition d = schmidt_numeric(g);
  const G1Result zero = g1_schmidt(d, squeeze_params(d, 0.0));
  CHECK(zero.g1.cwiseAbs().maxCoeff() == 0.0);
  const SqueezeParams sq = squeeze_params(d, 3.0);
  const G1Result r = g1_schmidt(d, sq);
  CHECK(g.dt * r.g1.sum() == doctest::Approx(sq.s.squaredNorm()).epsilon(1e-6));
  CHECK(r.n_pulse == doctest::Approx(sq.s.squaredNorm()));
  // The pump phase drops out of G1.
  const G1Result rotated = g1_schmidt(d, squeeze_params(d, std::polar(3.0, 1.3)));
  CHECK((rotated.g1 - r.g1).cwiseAbs().maxCoeff() < 1e-12 * r.g1.maxCoeff());
  SqueezeParams bad = sq;
  bad.s.conservativeResize(3);
  CHECK_THROWS_AS(g1_schmidt(d, bad), Error);
}

TEST_CASE("incoherent term equals the defining pair sum") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 6.0), 96);
  const SchmidtDecomposition d = schmidt_numeric(g);
  const SqueezeParams sq = squeeze_params(d, 2.0);
  const G2Result r = g2_schmidt(d, sq);
  std::vector<std::pair<int, int>> pts{{48, 48}, {40, 52}, {10, 70}, {30, 31}};
  const auto sums = g2_incoherent_pair_sum(d, sq, pts);
  for (size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(sums[i] - r.incoherent(pts[i].first, pts[i].second)) < 1e-10 * r.incoherent.maxCoeff());
  CHECK((r.coherent - r.coherent.transpose()).cwiseAbs().maxCoeff() < 1e-12 * r.coherent.maxCoeff());
  CHECK((r.incoherent - r.incoherent.transpose()).cwiseAbs().maxCoeff() < 1e-12 * r.incoherent.maxCoeff());
}

TEST_CASE("weak squeezing reduces G2 to the biphoton intensity") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 6.0), 96);
  // The full set of modes; a truncated tail of mass 1e-8 is 1e-4 in amplitude.
  const SchmidtDecomposition d = schmidt_numeric(g, Truncation{.keep_all = true});
  const double b = 1e-3;
  const G2Result r = g2_schmidt(d, squeeze_params(d, b));
  const RMatrix expect = (b * b) * g.values.cwiseAbs2();
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k)
      if (expect(j, k) > 1e-2 * expect.maxCoeff())
        worst = std::max(worst, std::abs(r.total()(j, k) - expect(j, k)) / expect(j, k));
  CHECK(worst < 1e-4);
}

TEST_CASE("frequency-domain G1 matches the transform of the time-domain result") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 5.0), 128, 2.0);
  const SchmidtDecomposition d = schmidt_numeric(g);
  const SqueezeParams sq = squeeze_params(d, 1.5);
  const SpectralModes sm = modes_frequency(d);
  const RVector g1w = sm.modes.cwiseAbs2() * sq.s.cwiseAbs2();
  const G1Result t = g1_schmidt(d, sq);
  const CMatrix w = fourier_matrix(g.n, g.dt, g.t0);
  const CMatrix cross_w = (g.dt / sm.dw) * (w.conjugate() * t.cross * w.transpose());
  const RVector diag = cross_w.diagonal().real();
  CHECK((diag - g1w).cwiseAbs().maxCoeff() < 1e-6 * g1w.maxCoeff());
  CHECK(sm.dw * g1w.sum() == doctest::Approx(t.n_pulse).epsilon(1e-6));
}

TEST_CASE("two-photon correlations") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 6.0), 96);
  const SchmidtDecomposition d = schmidt_numeric(g, Truncation{.keep_all = true});
  const TwoPhotonG tp = two_photon_g(d);
  CHECK(g.dt * tp.g1.sum() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((tp.g2 - 2.0 * g.values.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-8 * tp.g2.maxCoeff());
}

TEST_CASE("strong squeezing is dominated by the first mode") {
  const auto& fx = fixture::double_gaussian();
  const StrongSqueezeReport r = strong_squeeze_report(fx.dec, squeeze_params(fx.dec, 150.0));
  CHECK(r.dominance >= 0.95);
  CHECK(r.g1_single_mode_distance <= 0.05);

  SchmidtDecomposition flat;
  flat.dt = 1.0;
  flat.weights = RVector::Constant(4, 0.25);
  flat.modes = CMatrix::Identity(4, 4);
  const StrongSqueezeReport u = strong_squeeze_report(flat, squeeze_params(flat, 2.0));
  CHECK(u.dominance == doctest::Approx(0.25));
}

}
