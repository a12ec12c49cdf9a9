#pragma once

#include <optional>
#include <string>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "sqz/correlation.hpp"
#include "sqz/schmidt.hpp"
#include "sqz/ws.hpp"

namespace sqz::cli {

// Everything derived from the model source before any squeezing is applied.
struct Source {
  RunConfig cfg;
  std::optional<Model> model;
  AmplitudeGrid grid;
  Widths widths;
};

Source load_source(const RunConfig& cfg);
WsOptions ws_options(const Source& src);
WsDecomposition ws_for(const Source& src, cplx beta);

// Photon flux used to normalize plots; 1 when there are no photons.
double flux(double n_pulse, double pulse_duration);

Table g1_table(const G1Result& g1, double tp, double phi, int top_k, const std::string& prefix);
Table g2_table(const G2Result& g2, double tp, double phi, int stride);

int run_decompose(const RunConfig& cfg);
int run_correlate(const RunConfig& cfg);
int run_packets(const RunConfig& cfg);
int run_local(const RunConfig& cfg);
int run_reproduce(const RunConfig& cfg, const std::string& figure);
int run_export_grid(const RunConfig& cfg, const std::string& path);
int run_ingest_check(const RunConfig& cfg, const std::string& path);

const std::vector<std::string>& figure_ids();

} // namespace sqz::cli
