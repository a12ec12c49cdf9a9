#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqz/jsa.hpp"
#include "sqz/schmidt.hpp"

using namespace sqz;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an sqz::Error");
  return ErrorKind::InvalidArgument;
}

} // namespace

TEST_SUITE("jsa") {

TEST_CASE("double-Gaussian pointwise values") {
  const Model m = make_double_gaussian(1.0, 1.0);
  CHECK(gamma_time(m, 0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-14));
  CHECK(std::abs(gamma_freq(m, 0.0, 0.0) - cplx(1.0 / std::sqrt(pi))) < 1e-14);
  const Model n = make_double_gaussian(2.0, 7.0);
  // Direct transcription of the product of Gaussians in sum and difference times.
  const double t1 = 0.13, t2 = -0.05;
  const double expect = std::sqrt(14.0 / pi) * std::exp(-49.0 * (t1 - t2) * (t1 - t2) / 4.0) *
                        std::exp(-4.0 * (t1 + t2) * (t1 + t2) / 4.0);
  CHECK(gamma_time(n, t1, t2) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("sinc-hat pointwise values") {
  const Model m = make_sinc_hat(1.0, 1.0 / 24.0);
  CHECK(gamma_time(m, 0.0, 0.0) == doctest::Approx(std::sqrt(24.0)).epsilon(1e-13));
  CHECK(gamma_time(m, 0.6, 0.6) == 0.0);
  // half value on the edge of the top-hat
  CHECK(gamma_time(m, 0.5, 0.5) == doctest::Approx(0.5 * std::sqrt(24.0)).epsilon(1e-13));
  const Model n = make_sinc_hat(24.0, 1.0);
  CHECK(gamma_time(n, 0.5, -0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gamma_time(n, 0.25, -0.25) == doctest::Approx(std::sin(pi / 2) / (pi / 2) / std::sqrt(24.0)).epsilon(1e-13));
}

TEST_CASE("model constructors validate parameters") {
  CHECK(kind_of([] { make_double_gaussian(2.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_double_gaussian(0.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_sinc_hat(-1.0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("widths of the two models") {
  const Widths dg = widths(make_double_gaussian(1.0, 50.0));
  CHECK(dg.effective_schmidt == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(dg.coherence_time == doctest::Approx(1.0 / dg.coherence_bandwidth));
  const double a = 2.0 * std::sqrt(2.0 * pi);
  CHECK(dg.pulse_duration == doctest::Approx(a / std::sqrt(2.0)));
  const Widths dg2 = widths(make_double_gaussian(2.0, 30.0, 3.0));
  CHECK(dg2.effective_schmidt == doctest::Approx(9.0 * 30.0 / (4.0 * pi * 2.0)).epsilon(1e-12));

  const Widths sh = widths(make_sinc_hat(24.0, 1.0));
  CHECK(sh.pulse_duration == doctest::Approx(24.5));
  CHECK(sh.coherence_bandwidth == doctest::Approx(1.0 + 1.0 / 48.0));
  CHECK(sh.effective_schmidt == doctest::Approx(1.0 + 24.0 + 1.0 / 96.0).epsilon(1e-12));
  const Widths eq = widths(make_sinc_hat(1.0, 1.0));
  CHECK(eq.pulse_duration == doctest::Approx(1.5));
  CHECK(eq.effective_schmidt == doctest::Approx(2.25));
}

TEST_CASE("peak amplitude scales as one over sqrt(T_p T_c)") {
  CHECK(gamma_max_scaling(make_double_gaussian(1.0, 50.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (double r : {8.0, 24.0, 80.0, 240.0}) {
    const double s = gamma_max_scaling(make_sinc_hat(r, 1.0));
    // (T_p + T_c/2) / (1/T_c + 1/(2 T_p)) = T_p T_c exactly
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s > 0.1);
    CHECK(s < 10.0);
  }
  // invariant under a common rescaling of time
  CHECK(gamma_max_scaling(make_sinc_hat(24.0, 1.0)) ==
        doctest::Approx(gamma_max_scaling(make_sinc_hat(2.4, 0.1))).epsilon(1e-12));
  CHECK(gamma_max_scaling(make_double_gaussian(1.0, 5.0)) ==
        doctest::Approx(gamma_max_scaling(make_double_gaussian(10.0, 50.0))).epsilon(1e-12));
}

TEST_CASE("discretize gives a normalized symmetric grid") {
  for (const Model& m : {Model(make_double_gaussian(1.0, 10.0)), Model(make_sinc_hat(8.0, 1.0))}) {
    const AmplitudeGrid g = discretize(m, 96);
    CHECK(g.n == 96);
    CHECK(std::abs(grid_norm(g) - 1.0) < 1e-10);
    CHECK((g.values - g.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.time(0) == doctest::Approx(-g.time(95)).epsilon(1e-12));
    // proportional to direct evaluation
    const double scale = g.values(48, 48).real() / gamma_time(m, g.time(48), g.time(48));
    CHECK(std::abs(g.values(40, 52).real() - scale * gamma_time(m, g.time(40), g.time(52))) < 1e-12 * scale);
  }
  CHECK(kind_of([] { discretize(make_sinc_hat(8.0, 1.0), 8); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { discretize(make_sinc_hat(8.0, 1.0), 64, 0.5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("sinc-hat grid peaks on the diagonal inside the pulse") {
  const AmplitudeGrid g = discretize(make_sinc_hat(24.0, 1.0), 256);
  for (int j = 0; j < g.n; ++j) {
    if (std::abs(g.time(j)) >= 12.0) continue;
    const double diag = std::abs(g.values(j, j));
    CHECK(diag >= g.values.row(j).cwiseAbs().maxCoeff() - 1e-14);
  }
}

TEST_CASE("JTA round trip") {
  AmplitudeGrid g = discretize(make_double_gaussian(1.0, 10.0), 32);
  g.values *= std::polar(1.0, 0.7);
  g.unit = "ps";
  std::stringstream ss;
  write_grid(g, ss);
  const AmplitudeGrid raw = read_grid(ss, false);
  CHECK(raw.n == g.n);
  CHECK(raw.dt == g.dt);
  CHECK(raw.t0 == g.t0);
  CHECK(raw.unit == "ps");
  CHECK((raw.values - g.values).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream again(ss.str());
  const AmplitudeGrid norm = read_grid(again);
  CHECK(std::abs(grid_norm(norm) - 1.0) < 1e-14);
}

TEST_CASE("JTA rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_grid(in);
  };
  CHECK(kind_of([&] { parse(""); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v2\nn 1 dt 1 t0 0\n1 0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v1\nn 2 dt 1\n"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v1\nn 2 dt 1 t0 0\n1 0\n0 0\n0 0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v1\nn 1 dt 1 t0 0\n1 0\n1 0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v1\nn 1 dt 1 t0 0\n1 zz\n"); }) == ErrorKind::Format);
  CHECK(kind_of([&] { parse("JTA v1\nn 2 dt 1 t0 0\n1 0\n0.5 0\n0.49 0\n1 0\n"); }) == ErrorKind::NotSymmetric);
  CHECK(kind_of([&] { parse("JTA v1\nn 1 dt 1 t0 0\n0 0\n"); }) == ErrorKind::Validation);
  CHECK(kind_of([] { read_grid_file("/nonexistent/grid.jta"); }) == ErrorKind::Io);
}

TEST_CASE("JTA tolerates tiny asymmetry and symmetrizes it") {
  std::istringstream in("JTA v1\nn 2 dt 1 t0 0\n1 0\n0.5 0\n0.5000000001 0\n1 0\n");
  const AmplitudeGrid g = read_grid(in);
  CHECK(g.values(0, 1) == g.values(1, 0));
}

TEST_CASE("Fourier transform round trip and analytic spectrum") {
  const Model m = make_double_gaussian(1.0, 4.0);
  const AmplitudeGrid g = discretize(m, 128, 2.5);
  const SpectralGrid s = to_frequency(g);
  const AmplitudeGrid back = to_time(s, g.dt, g.t0);
  CHECK((back.values - g.values).norm() < 1e-10 * g.values.norm());
  // The grid is normalized, so compare against the analytic spectrum scaled the same way.
  const double scale = g.values(64, 64).real() / gamma_time(m, g.time(64), g.time(64));
  double err = 0.0, ref = 0.0;
  for (int a = 0; a < s.n; a += 3)
    for (int b = 0; b < s.n; b += 3) {
      const cplx e = scale * gamma_freq(m, s.freq(a), s.freq(b));
      err += std::norm(s.values(a, b) - e);
      ref += std::norm(e);
    }
  CHECK(std::sqrt(err / ref) < 1e-6);
}

TEST_CASE("Schmidt weights are invariant under a common time rescaling") {
  const AmplitudeGrid a = discretize(make_double_gaussian(1.0, 6.0), 96);
  const AmplitudeGrid b = discretize(make_double_gaussian(3.0, 18.0), 96);
  const RVector pa = schmidt_numeric(a).weights, pb = schmidt_numeric(b).weights;
  const int k = static_cast<int>(std::min(pa.size(), pb.size()));
  CHECK((pa.head(k) - pb.head(k)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("grid width estimates") {
  const AmplitudeGrid g = discretize(make_double_gaussian(1.0, 10.0), 128);
  const Widths w = grid_widths(g);
  CHECK(w.pulse_duration > 0.0);
  CHECK(w.effective_schmidt >= 1.0);
  AmplitudeGrid z = g;
  z.values.setZero();
  CHECK(kind_of([&] { grid_widths(z); }) == ErrorKind::Validation);
}

}
