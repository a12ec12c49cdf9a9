#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "sqz/format.hpp"
#include "sqz/local_states.hpp"
#include "sqz/pseudo_schmidt.hpp"

namespace sqz::cli {

using nlohmann::json;

Source load_source(const RunConfig& cfg) {
  Source s;
  s.cfg = cfg;
  s.model = build_model(cfg);
  s.grid = build_grid(cfg);
  s.widths = build_widths(cfg, s.grid);
  return s;
}

WsOptions ws_options(const Source& src) {
  WsOptions o;
  o.omega = src.cfg.ws_omega.value_or(src.cfg.omega_factor() * 2.0 * pi * src.widths.coherence_bandwidth);
  o.band_tolerance = src.cfg.ws_band_tolerance;
  return o;
}

WsDecomposition ws_for(const Source& src, cplx beta) { return ws_sample(src.grid, beta, ws_options(src)); }

double flux(double n_pulse, double pulse_duration) { return n_pulse > 0.0 ? n_pulse / pulse_duration : 1.0; }

Table g1_table(const G1Result& g1, double tp, double phi, int top_k, const std::string& prefix) {
  Table t;
  t.columns = {"t_over_Tp", "G1_over_Phi"};
  std::vector<int> cols(static_cast<size_t>(g1.contributions.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  const RVector weight = g1.contributions.colwise().sum();
  std::stable_sort(cols.begin(), cols.end(), [&](int a, int b) { return weight(a) > weight(b); });
  cols.resize(std::min<size_t>(cols.size(), static_cast<size_t>(top_k)));
  std::sort(cols.begin(), cols.end());
  for (int c : cols) t.columns.push_back(prefix + std::to_string(c));
  for (Eigen::Index j = 0; j < g1.time.size(); ++j) {
    std::vector<double> row{g1.time(j) / tp, g1.g1(j) / phi};
    for (int c : cols) row.push_back(g1.contributions(j, c) / phi);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table g2_table(const G2Result& g2, double tp, double phi, int stride) {
  Table t;
  t.columns = {"t1_over_Tp", "t2_over_Tp", "G2_over_Phi2", "coherent", "incoherent"};
  const double p2 = phi * phi;
  for (Eigen::Index j = 0; j < g2.time.size(); j += stride)
    for (Eigen::Index k = 0; k < g2.time.size(); k += stride)
      t.rows.push_back({g2.time(j) / tp, g2.time(k) / tp, (g2.coherent(j, k) + g2.incoherent(j, k)) / p2,
                        g2.coherent(j, k) / p2, g2.incoherent(j, k) / p2});
  return t;
}

namespace {

json widths_json(const Widths& w) {
  return {{"pulse_duration", w.pulse_duration},
          {"coherence_bandwidth", w.coherence_bandwidth},
          {"coherence_time", w.coherence_time},
          {"effective_schmidt", w.effective_schmidt}};
}

int finish(OutputSet& out) {
  out.finish();
  for (const auto& c : out.checks()) {
    const auto p = c.pass();
    std::cout << c.name << " = " << format_double(c.value) << (p ? (*p ? "  [pass]" : "  [FAIL]") : "") << "\n";
  }
  std::cout << "wrote " << out.dir() << "/manifest.json\n";
  return out.all_pass() ? 0 : 3;
}

} // namespace

int run_decompose(const RunConfig& cfg) {
  const Source src = load_source(cfg);
  OutputSet out(cfg, "decompose");
  const SchmidtDecomposition dec = schmidt_numeric(src.grid);
  Table w;
  w.columns = {"n", "p_n", "cumulative"};
  double acc = 0.0;
  for (int n = 0; n < dec.size(); ++n) {
    acc += dec.weights(n);
    w.rows.push_back({static_cast<double>(n), dec.weights(n), acc});
  }
  out.table("schmidt_weights", w);

  const WsDecomposition ws = ws_for(src, cfg.beta());
  Table b;
  b.columns = {"n", "m", "re", "im"};
  for (int i = 0; i < ws.size(); ++i)
    for (int j = 0; j < ws.size(); ++j)
      b.rows.push_back({static_cast<double>(ws.n_min + i), static_cast<double>(ws.n_min + j), ws.beta_matrix(i, j).real(),
                        ws.beta_matrix(i, j).imag()});
  out.table("ws_beta_matrix", b,
            {{"tau", format_double(ws.tau)}, {"omega", format_double(ws.omega)}, {"out_of_band", format_double(ws.out_of_band)}});

  out.json("widths", widths_json(src.widths));
  const double k = schmidt_number(dec.weights);
  const KComparison kc = effective_vs_exact_k(src.grid, src.widths);
  json rep{{"K", k},
           {"K_trace", kc.k},
           {"K_effective", kc.k_eff},
           {"K_le_K_effective", kc.holds},
           {"modes_retained", dec.size()},
           {"beta_ring_mag", std::abs(ws.beta_ring)},
           {"regime", regime_name(classify_regime(std::abs(ws.beta_ring)))}};
  if (src.model)
    if (const auto* dg = std::get_if<DoubleGaussian>(&*src.model)) rep["K_analytic"] = dg_schmidt_number(*dg);
  out.json("K_report", rep);
  out.check({"K", k, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "Schmidt number from the weights"});
  out.check({"K_trace_rel_diff", std::abs(kc.k - k) / k, std::nullopt, std::nullopt, std::nullopt, 1e-6, ""});
  out.check({"K_over_K_effective", kc.k / kc.k_eff, std::nullopt, std::nullopt, std::nullopt, 1.0 + 1e-3, ""});
  return finish(out);
}

int run_correlate(const RunConfig& cfg) {
  const Source src = load_source(cfg);
  if (cfg.rep == "pseudo" && cfg.model != ModelKind::SincHat)
    throw Error(ErrorKind::Config, "rep=pseudo requires model=sinc_hat");
  OutputSet out(cfg, "correlate");
  const bool want1 = cfg.which != "g2", want2 = cfg.which != "g1";
  const RVector times = src.grid.times();
  G1Result g1;
  G2Result g2;
  std::string prefix = "mode_";
  if (cfg.rep == "schmidt") {
    const SchmidtDecomposition dec = schmidt_numeric(src.grid);
    const SqueezeParams sq = squeeze_params(dec, cfg.beta());
    g1 = g1_schmidt(dec, sq);
    if (want2) g2 = g2_schmidt(dec, sq);
  } else if (cfg.rep == "pseudo") {
    const PseudoSchmidt ps = build_pseudo_schmidt(std::get<SincHat>(*src.model));
    if (!ps.valid) std::cerr << "warning: T_p/T_c < 8, pseudo-Schmidt modes are outside their validity regime\n";
    g1 = g1_pseudo(ps, cfg.beta_mag, src.grid.n, src.grid.dt, src.grid.t0);
    if (want2) g2 = g2_pseudo(ps, cfg.beta_mag, src.grid.n, src.grid.dt, src.grid.t0);
    out.info("pseudo_modes", ps.n_modes);
  } else {
    const WsDecomposition ws = ws_for(src, cfg.beta());
    const BogoliubovFactors bf = bogoliubov(ws);
    g1 = g1_ws(ws, bf, times);
    if (want2) g2 = g2_ws(ws, bf, times);
    prefix = "packet_";
    out.info("ws_first_index", ws.n_min);
    out.info("beta_ring_mag", std::abs(ws.beta_ring));
  }
  const double tp = src.widths.pulse_duration;
  const double phi = flux(g1.n_pulse, tp);
  const double quad = src.grid.dt * g1.g1.sum();
  if (want1) out.table("g1", g1_table(g1, tp, phi, cfg.top_k, prefix), {{"rep", cfg.rep}, {"Phi", format_double(phi)}});
  if (want2) out.table("g2", g2_table(g2, tp, phi, cfg.g2_stride), {{"rep", cfg.rep}, {"Phi", format_double(phi)}});
  out.info("rep", cfg.rep);
  out.info("Phi", phi);
  out.check({"N_pulse", g1.n_pulse, std::nullopt, std::nullopt, std::nullopt, std::nullopt, ""});
  out.check({"N_pulse_quadrature", quad, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "dt * sum G1 on the grid"});
  return finish(out);
}

int run_packets(const RunConfig& cfg) {
  const Source src = load_source(cfg);
  OutputSet out(cfg, "packets");
  const WsDecomposition ws = ws_for(src, cfg.beta());
  const BogoliubovFactors bf = bogoliubov(ws);
  const RVector times = src.grid.times();
  const Packets pk = packets(ws, bf, times);
  const double tp = src.widths.pulse_duration;
  const double n_pulse = pk.gamma.squaredNorm();
  const double phi = flux(n_pulse, tp);
  const CMatrix ov = packet_overlaps(bf, pk.index);

  Table summary;
  summary.columns = {"n", "t_n_over_Tp", "Gamma2", "fwhm_over_Tp", "overlap_next"};
  for (size_t i = 0; i < pk.index.size(); ++i) {
    const int n = pk.index[i];
    const Eigen::Index c = static_cast<Eigen::Index>(i);
    const double next = i + 1 < pk.index.size() && pk.index[i + 1] == n + 1 ? std::abs(ov(c, c + 1)) : 0.0;
    summary.rows.push_back({static_cast<double>(ws.n_min + n), ws.time(n) / tp, pk.gamma(c) * pk.gamma(c),
                            fwhm(times, pk.rho.col(c).cwiseAbs2()) / tp, next});
  }
  out.table("packet_summary", summary);

  // The strongest packets, weighted so that they sum to G1.
  std::vector<Eigen::Index> order(pk.index.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return pk.gamma(a) > pk.gamma(b); });
  order.resize(std::min<size_t>(order.size(), static_cast<size_t>(std::max(cfg.top_k, 1))));
  std::sort(order.begin(), order.end());
  Table curves;
  curves.columns = {"t_over_Tp"};
  for (Eigen::Index c : order) curves.columns.push_back("packet_" + std::to_string(ws.n_min + pk.index[static_cast<size_t>(c)]));
  for (Eigen::Index j = 0; j < times.size(); ++j) {
    std::vector<double> row{times(j) / tp};
    for (Eigen::Index c : order) row.push_back(pk.gamma(c) * pk.gamma(c) * std::norm(pk.rho(j, c)) / phi);
    curves.rows.push_back(std::move(row));
  }
  out.table("packets", curves, {{"Phi", format_double(phi)}});
  out.info("skipped_packets", pk.skipped.size());
  out.check({"N_pulse_packets", n_pulse, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "sum of Gamma_n^2"});
  out.check({"N_pulse_trace", ws_n_pulse(bf), std::nullopt, std::nullopt, std::nullopt, std::nullopt, "Tr sinh^2 P"});
  return finish(out);
}

int run_local(const RunConfig& cfg) {
  const Source src = load_source(cfg);
  OutputSet out(cfg, "local");
  const WsDecomposition ws = ws_for(src, cfg.beta());
  const BogoliubovFactors bf = bogoliubov(ws);
  const double ring = std::abs(ws.beta_ring);
  std::vector<int> d = cfg.local_d;
  if (d.empty()) {
    const BlockWidth bw = default_block_width(ring);
    if (bw.warn) std::cerr << "warning: |beta_ring| = " << ring << " is beyond the local-state regime; using d = " << bw.d << "\n";
    d = {bw.d};
  }
  const std::vector<LocalBlock> blocks = extract_blocks(ws, cfg.local_centers, d);
  const double tp = src.widths.pulse_duration;
  const double phi = flux(ws_n_pulse(bf), tp);
  Table summary;
  summary.columns = {"center_over_Tp", "n_J", "d", "N_J", "leakage", "W_half", "norm_defect", "weak_valid", "g1_center_rel_err"};
  for (size_t j = 0; j < blocks.size(); ++j) {
    const LocalBlock& b = blocks[j];
    const int samples = 16 * b.d + 1;
    RVector t(samples);
    const double lo = (b.center_index - 0.5 * b.d) * b.tau, hi = (b.center_index + 0.5 * b.d) * b.tau;
    for (int i = 0; i < samples; ++i) t(i) = lo + (hi - lo) * i / (samples - 1);
    const G1Result loc = local_g1(b, t);
    const G1Result full = g1_ws(ws, bf, t);
    Table curve;
    curve.columns = {"t_over_Tp", "local_G1_over_Phi", "full_G1_over_Phi"};
    for (int i = 0; i < samples; ++i) curve.rows.push_back({t(i) / tp, loc.g1(i) / phi, full.g1(i) / phi});
    out.table("local_g1_" + std::to_string(j), curve, {{"d", std::to_string(b.d)}});
    const double tc = b.center_index * b.tau;
    RVector one(1);
    one << tc;
    const double f0 = g1_ws(ws, bf, one).g1(0);
    const double err = f0 > 0.0 ? std::abs(local_g1_at(b, tc) - f0) / f0 : 0.0;
    const WeakKet k = weak_ket_expansion(b);
    summary.rows.push_back({b.center_time / tp, static_cast<double>(b.center_index), static_cast<double>(b.d), b.n_photons, b.leakage,
                            disentangle(b).w_half, k.norm_defect, k.valid ? 1.0 : 0.0, err});
  }
  out.table("local_blocks", summary);
  out.info("beta_ring_mag", ring);
  out.info("regime", regime_name(classify_regime(ring)));
  return finish(out);
}

int run_export_grid(const RunConfig& cfg, const std::string& path) {
  const AmplitudeGrid g = build_grid(cfg);
  std::ostringstream s;
  write_grid(g, s);
  if (!path.empty()) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
    f << s.str();
    if (!f) throw Error(ErrorKind::Io, "write failed for " + path);
    std::cout << "wrote " << path << "\n";
    return 0;
  }
  OutputSet out(cfg, "export-grid");
  out.raw("grid.jta", s.str());
  return finish(out);
}

int run_ingest_check(const RunConfig& base, const std::string& path) {
  RunConfig cfg = base;
  if (!path.empty()) {
    cfg.model = ModelKind::GridFile;
    cfg.grid_file = path;
  }
  if (cfg.model != ModelKind::GridFile) throw Error(ErrorKind::Config, "ingest-check needs a grid file");
  const Source src = load_source(cfg);
  OutputSet out(cfg, "ingest-check");
  json rep{{"n", src.grid.n}, {"dt", src.grid.dt}, {"t0", src.grid.t0}, {"unit", src.grid.unit}, {"widths", widths_json(src.widths)}};
  rep["K_trace"] = schmidt_number_trace(src.grid);
  WsOptions o = ws_options(src);
  const double oob = out_of_band_mass(src.grid, *o.omega);
  rep["out_of_band"] = oob;
  rep["band_limited"] = oob <= o.band_tolerance;
  o.band_tolerance = 1.0;
  const WsDecomposition ws = ws_sample(src.grid, cfg.beta(), o);
  const CMatrix rec = ws_reconstruct_grid(ws, src.grid.times());
  const double err = (rec - src.grid.values).norm() / src.grid.values.norm();
  rep["ws_samples"] = ws.size();
  rep["reconstruction_rel_l2"] = err;
  rep["beta_ring_mag"] = std::abs(ws.beta_ring);
  rep["regime"] = regime_name(classify_regime(std::abs(ws.beta_ring)));
  out.json("ingest_report", rep);
  out.check({"reconstruction_rel_l2", err, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "diagnostic only"});
  out.check({"out_of_band", oob, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "diagnostic only"});
  std::cout << "grid n = " << src.grid.n << ", K = " << format_double(rep["K_trace"].get<double>()) << ", regime "
            << rep["regime"].get<std::string>() << "\n";
  return finish(out);
}

} // namespace sqz::cli
