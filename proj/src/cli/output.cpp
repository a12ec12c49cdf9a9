#include "cli/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sqz/format.hpp"

namespace sqz::cli {

namespace {

// JSON cannot hold inf/nan; they are written as null.
nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

} // namespace

std::optional<bool> Check::pass() const {
  if (lower || upper) return (!lower || value >= *lower) && (!upper || value <= *upper);
  if (target && rel_tol) return std::abs(value - *target) <= *rel_tol * std::abs(*target);
  return std::nullopt;
}

OutputSet::OutputSet(const RunConfig& cfg, std::string command)
    : dir_(cfg.output_dir), format_(cfg.output_format), hash_(config_hash(cfg)), command_(std::move(command)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir_ + ": " + ec.message());
}

void OutputSet::write_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::path(dir_) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
  files_.emplace_back(name, hex64(fnv1a(content)));
}

void OutputSet::table(const std::string& name, const Table& t, const nlohmann::json& meta) {
  if (format_ == "json") {
    nlohmann::json m = meta;
    m["config_hash"] = hash_;
    m["columns"] = t.columns;
    nlohmann::json data = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (double x : row) r.push_back(num(x));
      data.push_back(std::move(r));
    }
    nlohmann::json body{{"meta", m}, {"data", data}};
    write_file(name + ".json", body.dump(1) + "\n");
    return;
  }
  std::string s = "# config_hash " + hash_ + "\n";
  for (auto it = meta.begin(); it != meta.end(); ++it) s += "# " + it.key() + " " + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_double(row[i]);
    }
    s += '\n';
  }
  write_file(name + ".csv", s);
}

void OutputSet::json(const std::string& name, const nlohmann::json& body) {
  nlohmann::json b = body;
  if (b.is_object() && !b.contains("meta")) b = nlohmann::json{{"meta", {{"config_hash", hash_}}}, {"data", body}};
  write_file(name + ".json", b.dump(1) + "\n");
}

bool OutputSet::all_pass() const {
  for (const auto& c : checks_)
    if (c.pass() == false) return false;
  return true;
}

std::string OutputSet::finish() {
  nlohmann::json m;
  m["command"] = command_;
  m["config_hash"] = hash_;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, h] : files_) files.push_back({{"name", name}, {"fnv1a", h}});
  m["files"] = files;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json j{{"name", c.name}, {"value", num(c.value)}};
    if (c.target) j["target"] = *c.target;
    if (c.rel_tol) j["rel_tol"] = *c.rel_tol;
    if (c.lower) j["lower"] = *c.lower;
    if (c.upper) j["upper"] = *c.upper;
    const auto p = c.pass();
    j["pass"] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  m["checks"] = checks;
  m["info"] = info_;
  const auto path = (std::filesystem::path(dir_) / "manifest.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << m.dump(1) << "\n";
  return path;
}

} // namespace sqz::cli
