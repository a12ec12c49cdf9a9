// Canned runs behind each reproduced figure. Parameters follow the figure
// captions: sigma_c / sigma_p = 50 and T_p / T_c = 24, beta in {0.1, 5, 10}.
#include <algorithm>
#include <cmath>
#include <iostream>

#include "cli/commands.hpp"
#include "sqz/format.hpp"
#include "sqz/local_states.hpp"
#include "sqz/pseudo_schmidt.hpp"

namespace sqz::cli {

namespace {

using nlohmann::json;

const std::vector<double> betas = {0.1, 5.0, 10.0};
const std::vector<double> n_pulse_dg = {0.01, 35.0, 383.0};
const std::vector<double> n_pulse_sh = {0.01, 35.0, 335.0};

std::string tag(double beta) { return "beta_" + format_double(beta); }

Check near(const std::string& name, double value, double target, double rel) {
  Check c;
  c.name = name;
  c.value = value;
  c.target = target;
  c.rel_tol = rel;
  return c;
}

Check at_most(const std::string& name, double value, double upper, const std::string& note = "") {
  Check c;
  c.name = name;
  c.value = value;
  c.upper = upper;
  c.note = note;
  return c;
}

Check within(const std::string& name, double value, double lower, double upper, const std::string& note = "") {
  Check c;
  c.name = name;
  c.value = value;
  c.lower = lower;
  c.upper = upper;
  c.note = note;
  return c;
}

Check report(const std::string& name, double value, const std::string& note = "") {
  Check c;
  c.name = name;
  c.value = value;
  c.note = note;
  return c;
}

RunConfig with_model(const RunConfig& base, ModelKind m, const std::string& fig) {
  RunConfig c = base;
  c.model = m;
  c.grid_file.clear();
  c.sigma_ratio = 50.0;
  c.a = default_width_factor;
  c.tp_over_tc = 24.0;
  c.output_dir = base.output_dir + "/" + fig;
  return c;
}

void schmidt_panels(const Source& src, OutputSet& out, const std::vector<double>& targets, bool g1, bool g2) {
  const SchmidtDecomposition dec = schmidt_numeric(src.grid);
  const double tp = src.widths.pulse_duration;
  for (size_t i = 0; i < betas.size(); ++i) {
    const SqueezeParams sq = squeeze_params(dec, betas[i]);
    const G1Result r1 = g1_schmidt(dec, sq);
    const double phi = flux(r1.n_pulse, tp);
    if (g1) out.table("g1_" + tag(betas[i]), g1_table(r1, tp, phi, src.cfg.top_k, "mode_"), {{"Phi", format_double(phi)}});
    if (g2) out.table("g2_" + tag(betas[i]), g2_table(g2_schmidt(dec, sq), tp, phi, src.cfg.g2_stride), {{"Phi", format_double(phi)}});
    out.check(near("N_pulse_" + tag(betas[i]), r1.n_pulse, targets[i], 0.03));
  }
  out.info("K", schmidt_number(dec.weights));
}

void pseudo_panels(const Source& src, OutputSet& out, bool g1, bool g2) {
  const PseudoSchmidt ps = build_pseudo_schmidt(std::get<SincHat>(*src.model));
  const SchmidtDecomposition exact = g2 ? schmidt_numeric(src.grid) : SchmidtDecomposition{};
  const double tp = src.widths.pulse_duration;
  const AmplitudeGrid& g = src.grid;
  for (size_t i = 0; i < betas.size(); ++i) {
    const G1Result r1 = g1_pseudo(ps, betas[i], g.n, g.dt, g.t0);
    const double phi = flux(r1.n_pulse, tp);
    if (g1) out.table("g1_" + tag(betas[i]), g1_table(r1, tp, phi, src.cfg.top_k, "mode_"), {{"Phi", format_double(phi)}});
    if (g2) {
      const G2Result r2 = g2_pseudo(ps, betas[i], g.n, g.dt, g.t0);
      out.table("g2_" + tag(betas[i]), g2_table(r2, tp, phi, src.cfg.g2_stride), {{"Phi", format_double(phi)}});
      const G2Result ex = g2_schmidt(exact, squeeze_params(exact, betas[i]));
      out.check(at_most("G2_vs_schmidt_rel_l2_" + tag(betas[i]), relative_l2(r2.total(), ex.total(), 0.01), 0.10));
    }
    out.check(near("N_pulse_" + tag(betas[i]), r1.n_pulse, n_pulse_sh[i], 0.03));
  }
  out.info("pseudo_modes", ps.n_modes);
}

void ws_panels(const Source& src, OutputSet& out, bool g1, bool g2) {
  const SchmidtDecomposition dec = schmidt_numeric(src.grid);
  const double tp = src.widths.pulse_duration;
  const RVector t = src.grid.times();
  for (size_t i = 0; i < betas.size(); ++i) {
    const WsDecomposition ws = ws_for(src, betas[i]);
    const BogoliubovFactors bf = bogoliubov(ws);
    const SqueezeParams sq = squeeze_params(dec, betas[i]);
    const G1Result r1 = g1_ws(ws, bf, t);
    const double phi = flux(r1.n_pulse, tp);
    if (g1) {
      out.table("g1_" + tag(betas[i]), g1_table(r1, tp, phi, src.cfg.top_k, "packet_"), {{"Phi", format_double(phi)}});
      out.check(at_most("G1_vs_schmidt_rel_l2_" + tag(betas[i]), relative_l2(r1.g1, g1_schmidt(dec, sq).g1, 0.01), 0.02));
    }
    if (g2) {
      const G2Result r2 = g2_ws(ws, bf, t);
      out.table("g2_" + tag(betas[i]), g2_table(r2, tp, phi, src.cfg.g2_stride), {{"Phi", format_double(phi)}});
      out.check(at_most("G2_vs_schmidt_rel_l2_" + tag(betas[i]), relative_l2(r2.total(), g2_schmidt(dec, sq).total(), 0.01), 0.05));
    }
    out.check(near("N_pulse_" + tag(betas[i]), r1.n_pulse, n_pulse_dg[i], 0.03));
    out.check(near("beta_ring_" + tag(betas[i]), std::abs(ws.beta_ring), std::sqrt(2.0) * betas[i] / std::sqrt(src.widths.effective_schmidt), 0.02));
  }
}

int fig7(OutputSet& out, const Source& src) {
  const PseudoSchmidt ps = build_pseudo_schmidt(std::get<SincHat>(*src.model));
  const double wc = 2.0 * pi / ps.tc;
  const int n = 241;
  Table t;
  t.columns = {"w1_over_Wc", "w2_over_Wc", "approx_jsi", "exact_jsi"};
  const double ref = std::pow(approx_amplitude_freq(ps, 0.0, 0.0), 2);
  double false_peak = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w1 = wc * (-1.0 + 2.0 * i / (n - 1)), w2 = wc * (-1.0 + 2.0 * j / (n - 1));
      const double app = std::pow(approx_amplitude_freq(ps, w1, w2), 2);
      t.rows.push_back({w1 / wc, w2 / wc, app / ref, std::norm(gamma_freq(*src.model, w1, w2)) / ref});
      // Away from the true ridge w1 + w2 = 0 the envelope repeats at w1 + w2 = Wc.
      if (std::abs(w1 + w2) >= 0.5 * wc) false_peak = std::max(false_peak, app / ref);
    }
  out.table("jsi", t, {{"normalization", "approx_jsi(0,0)"}});
  out.check(report("false_contribution_peak", false_peak, "relative to the central value, near (Wc/2, Wc/2); no threshold"));
  return 0;
}

int fig8(OutputSet& out, const Source& src) {
  const PseudoSchmidt ps = build_pseudo_schmidt(std::get<SincHat>(*src.model));
  const double tp = src.widths.pulse_duration;
  const int n = 161;
  Table t;
  t.columns = {"t1_over_Tp", "t2_over_Tp", "approx_jti", "exact_jti", "mode_0", "mode_5"};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double t1 = tp * (-0.75 + 1.5 * i / (n - 1)), t2 = tp * (-0.75 + 1.5 * j / (n - 1));
      const double c0 = std::sqrt(ps.weight()) * eta_bar(ps, 0, t1) * eta_bar(ps, 0, t2);
      const double c5 = std::sqrt(ps.weight()) * eta_bar(ps, 5, t1) * eta_bar(ps, 5, t2);
      t.rows.push_back({t1 / tp, t2 / tp, std::pow(approx_amplitude_time(ps, t1, t2), 2), std::pow(gamma_time(*src.model, t1, t2), 2),
                        c0 * c0, c5 * c5});
    }
  out.table("jti", t);
  out.check(report("gamma_app_over_exact_at_origin", approx_amplitude_time(ps, 0, 0) / gamma_time(*src.model, 0, 0)));
  return 0;
}

int fig11(OutputSet& out) {
  const int modes = 25;
  Table t;
  t.columns = {"dt_over_Tc", "x", "G2_Tc2", "coherent", "incoherent"};
  for (double beta : betas) {
    const double x = beta / std::sqrt(static_cast<double>(modes));
    for (int i = 0; i <= 240; ++i) {
      const double d = -3.0 + 6.0 * i / 240.0;
      const G2Point g = g2_cw_analytic(1.0, x, d);
      t.rows.push_back({d, x, g.total(), g.coherent, g.incoherent});
    }
    const double nm = std::pow(std::sinh(x), 2);
    const G2Point z = g2_cw_analytic(1.0, x, 0.0);
    out.check(near("G2_zero_delay_" + tag(beta), z.total(), mode_by_mode_counts(nm, modes).pairs, 1e-6));
  }
  const G2Point weak = g2_cw_analytic(1.0, 0.02, 0.0);
  out.check(within("weak_coh_over_incoh", weak.coherent / weak.incoherent, 1e3, INFINITY));
  out.table("g2_cw", t);
  return 0;
}

int fig14(OutputSet& out, const Source& src) {
  int prev = -1;
  bool monotone = true;
  json widths = json::array();
  for (double beta : betas) {
    const WsDecomposition ws = ws_for(src, beta);
    const BogoliubovFactors bf = bogoliubov(ws);
    const int c = -ws.n_min;
    const int h = std::min(20, std::min(c, ws.n_max()));
    Table t;
    t.columns = {"n", "m", "abs_sinhP"};
    for (int i = c - h; i <= c + h; ++i)
      for (int j = c - h; j <= c + h; ++j) t.rows.push_back({static_cast<double>(ws.n_min + i), static_cast<double>(ws.n_min + j), std::abs(bf.sinhP(i, j))});
    out.table("sinhP_" + tag(beta), t);
    const int bw = efold_bandwidth(bf.sinhP, c);
    widths.push_back(bw);
    monotone = monotone && bw >= prev;
    prev = bw;
  }
  out.info("efold_bandwidths", widths);
  out.check(within("bandwidth_non_decreasing", monotone ? 1.0 : 0.0, 1.0, 1.0));
  return 0;
}

int fig17(OutputSet& out, const Source& src) {
  const double beta = 0.1;
  const WsDecomposition ws = ws_for(src, beta);
  const BogoliubovFactors bf = bogoliubov(ws);
  const double tp = src.widths.pulse_duration;
  RVector one(1);
  one << 0.0;
  const double full0 = g1_ws(ws, bf, one).g1(0);
  const double phi = flux(ws_n_pulse(bf), tp);
  double prev = INFINITY;
  bool monotone = true;
  for (int d : {7, 9, 11}) {
    const LocalBlock b = extract_blocks(ws, {0.0}, d).front();
    const int samples = 16 * d + 1;
    RVector t(samples);
    for (int i = 0; i < samples; ++i) t(i) = (-0.5 * d + static_cast<double>(d) * i / (samples - 1)) * ws.tau;
    const G1Result loc = local_g1(b, t), full = g1_ws(ws, bf, t);
    Table tab;
    tab.columns = {"t_over_Tp", "local_G1_over_Phi", "full_G1_over_Phi"};
    for (int i = 0; i < samples; ++i) tab.rows.push_back({t(i) / tp, loc.g1(i) / phi, full.g1(i) / phi});
    out.table("local_g1_d" + std::to_string(d), tab);
    const double err = std::abs(local_g1_at(b, 0.0) - full0) / full0;
    out.check(report("center_rel_err_d" + std::to_string(d), err));
    monotone = monotone && err <= prev;
    prev = err;
  }
  out.check(at_most("center_rel_err_d11", prev, 0.02));
  out.check(within("error_non_increasing", monotone ? 1.0 : 0.0, 1.0, 1.0));
  return 0;
}

void strong(OutputSet& out, const Source& src, bool g1, bool g2) {
  const double beta = 150.0;
  const SchmidtDecomposition dec = schmidt_numeric(src.grid);
  const SqueezeParams sq = squeeze_params(dec, beta);
  const double tp = src.widths.pulse_duration;
  const G1Result r1 = g1_schmidt(dec, sq);
  const double phi = flux(r1.n_pulse, tp);
  const RVector t = src.grid.times();
  if (g1) {
    const StrongSqueezeReport rep = strong_squeeze_report(dec, sq);
    out.table("g1_schmidt", g1_table(r1, tp, phi, src.cfg.top_k, "mode_"), {{"Phi", format_double(phi)}});
    const WsDecomposition ws = ws_for(src, beta);
    const BogoliubovFactors bf = bogoliubov(ws);
    const G1Result w1 = g1_ws(ws, bf, t);
    out.table("g1_ws", g1_table(w1, tp, flux(w1.n_pulse, tp), src.cfg.top_k, "packet_"));
    out.check(within("dominance", rep.dominance, 0.95, 1.0));
    out.check(at_most("single_mode_G1_rel_l2", rep.g1_single_mode_distance, 0.05));
    out.check(report("ws_vs_schmidt_G1_rel_l2", relative_l2(w1.g1, r1.g1, 0.01)));
    const std::vector<int> idx = packets(ws, bf, t).index;
    const CMatrix ov = packet_overlaps(bf, idx);
    const double g2max = bf.gamma.maxCoeff() * bf.gamma.maxCoeff();
    double acc = 0.0;
    int cnt = 0;
    for (Eigen::Index i = 0; i + 1 < ov.rows(); ++i)
      if (std::pow(bf.gamma(idx[static_cast<size_t>(i)]), 2) > 0.01 * g2max) {
        acc += std::abs(ov(i, i + 1));
        ++cnt;
      }
    out.check(within("mean_neighbour_packet_overlap", cnt ? acc / cnt : 0.0, 0.5, 1.0));
  }
  if (g2) {
    const G2Result r2 = g2_schmidt(dec, sq);
    out.table("g2_schmidt", g2_table(r2, tp, phi, src.cfg.g2_stride), {{"Phi", format_double(phi)}});
    const double cut = 0.01 * r2.coherent.maxCoeff();
    double lo = INFINITY, hi = 0.0;
    for (Eigen::Index j = 0; j < r2.coherent.rows(); ++j)
      for (Eigen::Index k = 0; k < r2.coherent.cols(); ++k)
        if (r2.coherent(j, k) > cut) {
          const double q = r2.incoherent(j, k) / r2.coherent(j, k);
          lo = std::min(lo, q);
          hi = std::max(hi, q);
        }
    out.check(within("incoh_over_coh_min", lo, 1.8, 2.2, "pointwise over coherent > 1% of max"));
    out.check(within("incoh_over_coh_max", hi, 1.8, 2.2, "pointwise over coherent > 1% of max"));
    out.check(report("incoh_over_coh_integrated", r2.incoherent.sum() / r2.coherent.sum()));
  }
}

} // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2",  "fig3",  "fig5",  "fig6",  "fig7",  "fig8",  "fig9", "fig10",
                                               "fig11", "fig13", "fig14", "fig15", "fig17", "fig19", "fig20"};
  return ids;
}

int run_reproduce(const RunConfig& base, const std::string& fig) {
  const auto& ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), fig) == ids.end()) throw Error(ErrorKind::Config, "unknown figure id '" + fig + "'");
  const bool dg = fig == "fig2" || fig == "fig3" || fig == "fig13" || fig == "fig14" || fig == "fig15" || fig == "fig17" ||
                  fig == "fig19" || fig == "fig20";
  RunConfig cfg = with_model(base, dg ? ModelKind::DoubleGaussian : ModelKind::SincHat, fig);
  if (fig == "fig11") cfg.beta_mag = 0.0;
  const Source src = load_source(cfg);
  OutputSet out(cfg, "reproduce " + fig);
  out.info("figure", fig);
  if (fig == "fig2" || fig == "fig3") schmidt_panels(src, out, n_pulse_dg, fig == "fig2", fig == "fig3");
  else if (fig == "fig5" || fig == "fig6") schmidt_panels(src, out, n_pulse_sh, fig == "fig5", fig == "fig6");
  else if (fig == "fig7") fig7(out, src);
  else if (fig == "fig8") fig8(out, src);
  else if (fig == "fig9" || fig == "fig10") pseudo_panels(src, out, fig == "fig9", fig == "fig10");
  else if (fig == "fig11") fig11(out);
  else if (fig == "fig13" || fig == "fig15") ws_panels(src, out, fig == "fig13", fig == "fig15");
  else if (fig == "fig14") fig14(out, src);
  else if (fig == "fig17") fig17(out, src);
  else strong(out, src, fig == "fig19", fig == "fig20");
  out.finish();
  for (const auto& c : out.checks()) {
    const auto p = c.pass();
    std::cout << fig << " " << c.name << " = " << format_double(c.value) << (p ? (*p ? "  [pass]" : "  [FAIL]") : "") << "\n";
  }
  return out.all_pass() ? 0 : 3;
}

} // namespace sqz::cli
