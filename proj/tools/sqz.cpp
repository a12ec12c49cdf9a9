#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

int exit_code(sqz::ErrorKind k) {
  switch (k) {
  case sqz::ErrorKind::Config:
  case sqz::ErrorKind::InvalidArgument: return 2;
  case sqz::ErrorKind::Io:
  case sqz::ErrorKind::Format: return 4;
  default: return 3;
  }
}

// Remaining arguments are `--key value` or `--key=value` config overrides.
void apply_overrides(sqz::cli::ConfigSource& src, const std::vector<std::string>& extra) {
  for (size_t i = 0; i < extra.size(); ++i) {
    const std::string& a = extra[i];
    if (a.rfind("--", 0) != 0) throw sqz::Error(sqz::ErrorKind::Config, "unexpected argument '" + a + "'");
    const auto eq = a.find('=');
    if (eq != std::string::npos) {
      src.set(a.substr(2, eq - 2), a.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extra.size()) throw sqz::Error(sqz::ErrorKind::Config, "option '" + a + "' needs a value");
    src.set(a.substr(2), extra[++i]);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decompose pulsed squeezed light and evaluate its correlation functions"};
  app.require_subcommand(1);
  std::string config_path, figure, file;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->allow_extras();
    return sub;
  };
  CLI::App* decompose = add("decompose", "Schmidt weights, WS squeezing matrix, widths and K report");
  CLI::App* correlate = add("correlate", "G1/G2 in the Schmidt, pseudo-Schmidt or WS representation");
  CLI::App* packets = add("packets", "WS packet expansion of G1");
  CLI::App* local = add("local", "local-state blocks of the squeezing matrix");
  CLI::App* reproduce = add("reproduce", "data behind one figure, with a manifest of checks");
  reproduce->add_option("figure", figure, "figure id")->required();
  CLI::App* export_grid = add("export-grid", "write the discretized amplitude as a JTA v1 file");
  export_grid->add_option("--out", file, "output file (default: <output.dir>/grid.jta)");
  CLI::App* ingest = add("ingest-check", "validate and summarize a JTA v1 grid file");
  ingest->add_option("file", file, "grid file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    sqz::cli::ConfigSource src;
    if (!config_path.empty()) src.load_file(config_path);
    apply_overrides(src, sub->remaining());
    // Commands that fix their own model still need a resolvable config.
    if (sub == reproduce || sub == ingest) {
      sqz::cli::ConfigSource probe = src;
      try {
        probe.resolve();
      } catch (const sqz::Error&) {
        src.set("model", sub == ingest ? "grid_file" : "double_gaussian", "default");
        if (sub == ingest) src.set("grid_file", file, "default");
      }
    }
    const sqz::cli::RunConfig cfg = src.resolve();
    if (sub == decompose) return sqz::cli::run_decompose(cfg);
    if (sub == correlate) return sqz::cli::run_correlate(cfg);
    if (sub == packets) return sqz::cli::run_packets(cfg);
    if (sub == local) return sqz::cli::run_local(cfg);
    if (sub == reproduce) return sqz::cli::run_reproduce(cfg, figure);
    if (sub == export_grid) return sqz::cli::run_export_grid(cfg, file);
    return sqz::cli::run_ingest_check(cfg, file);
  } catch (const sqz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
