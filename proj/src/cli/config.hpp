#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqz/jsa.hpp"

namespace sqz::cli {

enum class ModelKind { DoubleGaussian, SincHat, GridFile };

struct RunConfig {
  ModelKind model = ModelKind::DoubleGaussian;
  std::string grid_file;
  double sigma_ratio = 50.0;
  double a = default_width_factor;
  double tp_over_tc = 24.0;
  double beta_mag = 1.0;
  double beta_phase = 0.0;
  int grid_n = default_grid_points;
  std::optional<double> grid_span;
  std::optional<double> ws_omega;
  std::optional<double> ws_omega_factor;
  double ws_band_tolerance = 1e-3;
  std::vector<double> local_centers{0.0};
  std::vector<int> local_d;
  std::string output_dir = "out";
  std::string output_format = "csv";
  int top_k = 5;
  int g2_stride = 4;
  std::string rep = "schmidt";
  std::string which = "both";

  cplx beta() const;
  // Sinc-hat amplitudes are not band-limited; their default sampling band is wider.
  double omega_factor() const;
};

// key -> (value, where it came from) before validation.
class ConfigSource {
public:
  void load_text(const std::string& text, const std::string& origin);
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value, const std::string& origin = "command line");
  RunConfig resolve() const;

private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys();

// Every key with its resolved value, one `key=value` per line, sorted.
std::string canonical(const RunConfig& c);
std::string config_hash(const RunConfig& c);

std::optional<Model> build_model(const RunConfig& c);
AmplitudeGrid build_grid(const RunConfig& c);
Widths build_widths(const RunConfig& c, const AmplitudeGrid& g);

} // namespace sqz::cli
