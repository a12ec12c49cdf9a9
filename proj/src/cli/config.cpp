#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sqz/format.hpp"

namespace sqz::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

[[noreturn]] void bad(const std::string& origin, const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::Config, origin + ": " + key + ": " + msg);
}

} // namespace

cplx RunConfig::beta() const { return std::polar(beta_mag, beta_phase); }

double RunConfig::omega_factor() const {
  if (ws_omega_factor) return *ws_omega_factor;
  return model == ModelKind::SincHat ? 4.0 : 1.0;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "model",          "grid_file",     "sigma_ratio",   "a",           "tp_over_tc",     "beta_mag",
      "beta_phase",     "grid.n",        "grid.span",     "ws.omega",    "ws.omega_factor", "ws.band_tolerance",
      "local.centers",  "local.d",       "output.dir",    "output.format", "output.top_k",  "output.g2_stride",
      "rep",            "which"};
  return keys;
}

void ConfigSource::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(no);
    if (eq == std::string::npos) throw Error(ErrorKind::Config, where + ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
}

void ConfigSource::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

void ConfigSource::set(const std::string& key_in, const std::string& value, const std::string& origin) {
  const std::string key = key_in == "beta" ? "beta_mag" : key_in;
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) bad(origin, key_in, "unknown key");
  entries_[key] = {value, origin};
}

RunConfig ConfigSource::resolve() const {
  RunConfig c;
  auto num = [&](const std::string& key, double& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    if (!parse_double(it->second.value, out) || !std::isfinite(out)) bad(it->second.origin, key, "not a number: '" + it->second.value + "'");
    return true;
  };
  auto integer = [&](const std::string& key, int& out) {
    double x = 0.0;
    if (!num(key, x)) return false;
    if (x != std::floor(x) || std::abs(x) > 1e8) bad(entries_.at(key).origin, key, "not an integer");
    out = static_cast<int>(x);
    return true;
  };
  auto str = [&](const std::string& key, std::string& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    out = it->second.value;
    return true;
  };
  auto origin = [&](const std::string& key) {
    auto it = entries_.find(key);
    return it == entries_.end() ? std::string("default") : it->second.origin;
  };

  std::string model;
  if (!str("model", model)) throw Error(ErrorKind::Config, "config: missing 'model' (double_gaussian | sinc_hat | grid_file)");
  if (model == "double_gaussian")
    c.model = ModelKind::DoubleGaussian;
  else if (model == "sinc_hat")
    c.model = ModelKind::SincHat;
  else if (model == "grid_file")
    c.model = ModelKind::GridFile;
  else
    bad(origin("model"), "model", "expected double_gaussian, sinc_hat or grid_file, got '" + model + "'");
  const bool has_file = str("grid_file", c.grid_file);
  if (c.model == ModelKind::GridFile && (!has_file || c.grid_file.empty())) bad(origin("model"), "grid_file", "required when model=grid_file");
  if (c.model != ModelKind::GridFile && has_file) bad(origin("grid_file"), "grid_file", "only one model source may be given");

  num("sigma_ratio", c.sigma_ratio);
  if (!(c.sigma_ratio >= 1.0)) bad(origin("sigma_ratio"), "sigma_ratio", "must be at least 1");
  num("a", c.a);
  if (!(c.a > 0.0)) bad(origin("a"), "a", "must be positive");
  num("tp_over_tc", c.tp_over_tc);
  if (!(c.tp_over_tc > 0.0)) bad(origin("tp_over_tc"), "tp_over_tc", "must be positive");
  num("beta_mag", c.beta_mag);
  if (!(c.beta_mag >= 0.0)) bad(origin("beta_mag"), "beta_mag", "must be non-negative");
  num("beta_phase", c.beta_phase);
  integer("grid.n", c.grid_n);
  if (c.grid_n < 16) bad(origin("grid.n"), "grid.n", "must be at least 16");
  double x = 0.0;
  if (num("grid.span", x)) {
    if (!(x >= 1.0)) bad(origin("grid.span"), "grid.span", "must be at least 1");
    c.grid_span = x;
  }
  std::string omega;
  if (str("ws.omega", omega) && omega != "auto") {
    if (!parse_double(omega, x) || !(x > 0.0)) bad(origin("ws.omega"), "ws.omega", "expected 'auto' or a positive number");
    c.ws_omega = x;
  }
  if (num("ws.omega_factor", x)) {
    if (!(x > 0.0)) bad(origin("ws.omega_factor"), "ws.omega_factor", "must be positive");
    c.ws_omega_factor = x;
  }
  num("ws.band_tolerance", c.ws_band_tolerance);
  std::string list;
  if (str("local.centers", list)) {
    c.local_centers.clear();
    for (const auto& item : split_list(list)) {
      if (!parse_double(item, x)) bad(origin("local.centers"), "local.centers", "bad number '" + item + "'");
      c.local_centers.push_back(x);
    }
    if (c.local_centers.empty()) bad(origin("local.centers"), "local.centers", "empty list");
  }
  if (str("local.d", list) && list != "auto") {
    for (const auto& item : split_list(list)) {
      if (!parse_double(item, x) || x != std::floor(x) || x < 1 || static_cast<long>(x) % 2 == 0)
        bad(origin("local.d"), "local.d", "expected odd positive integers or 'auto'");
      c.local_d.push_back(static_cast<int>(x));
    }
  }
  str("output.dir", c.output_dir);
  str("output.format", c.output_format);
  if (c.output_format != "csv" && c.output_format != "json") bad(origin("output.format"), "output.format", "expected csv or json");
  integer("output.top_k", c.top_k);
  if (c.top_k < 0) bad(origin("output.top_k"), "output.top_k", "must be non-negative");
  integer("output.g2_stride", c.g2_stride);
  if (c.g2_stride < 1) bad(origin("output.g2_stride"), "output.g2_stride", "must be positive");
  str("rep", c.rep);
  if (c.rep != "schmidt" && c.rep != "pseudo" && c.rep != "ws") bad(origin("rep"), "rep", "expected schmidt, pseudo or ws");
  str("which", c.which);
  if (c.which != "g1" && c.which != "g2" && c.which != "both") bad(origin("which"), "which", "expected g1, g2 or both");
  return c;
}

std::string canonical(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  static const char* names[] = {"double_gaussian", "sinc_hat", "grid_file"};
  kv["model"] = names[static_cast<int>(c.model)];
  kv["grid_file"] = c.grid_file;
  kv["sigma_ratio"] = format_double(c.sigma_ratio);
  kv["a"] = format_double(c.a);
  kv["tp_over_tc"] = format_double(c.tp_over_tc);
  kv["beta_mag"] = format_double(c.beta_mag);
  kv["beta_phase"] = format_double(c.beta_phase);
  kv["grid.n"] = std::to_string(c.grid_n);
  kv["grid.span"] = c.grid_span ? format_double(*c.grid_span) : "auto";
  kv["ws.omega"] = c.ws_omega ? format_double(*c.ws_omega) : "auto";
  kv["ws.omega_factor"] = format_double(c.omega_factor());
  kv["ws.band_tolerance"] = format_double(c.ws_band_tolerance);
  std::vector<std::string> items;
  for (double t : c.local_centers) items.push_back(format_double(t));
  kv["local.centers"] = join(items);
  items.clear();
  for (int d : c.local_d) items.push_back(std::to_string(d));
  kv["local.d"] = items.empty() ? "auto" : join(items);
  kv["output.format"] = c.output_format;
  kv["output.top_k"] = std::to_string(c.top_k);
  kv["output.g2_stride"] = std::to_string(c.g2_stride);
  kv["rep"] = c.rep;
  kv["which"] = c.which;
  // output.dir is deliberately left out: moving the output does not change the run.
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a(canonical(c))); }

std::optional<Model> build_model(const RunConfig& c) {
  switch (c.model) {
  case ModelKind::DoubleGaussian: return Model(make_double_gaussian(1.0, c.sigma_ratio, c.a));
  case ModelKind::SincHat: return Model(make_sinc_hat(c.tp_over_tc, 1.0));
  case ModelKind::GridFile: return std::nullopt;
  }
  return std::nullopt;
}

AmplitudeGrid build_grid(const RunConfig& c) {
  const auto m = build_model(c);
  if (!m) return read_grid_file(c.grid_file);
  return discretize(*m, c.grid_n, c.grid_span.value_or(default_span(*m)));
}

Widths build_widths(const RunConfig& c, const AmplitudeGrid& g) {
  const auto m = build_model(c);
  return m ? widths(*m) : grid_widths(g);
}

} // namespace sqz::cli
