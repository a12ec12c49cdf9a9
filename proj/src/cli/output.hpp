#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace sqz::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// A scalar compared against a target. Checks without a tolerance are
// reported but never fail.
struct Check {
  std::string name;
  double value = 0.0;
  std::optional<double> target;
  std::optional<double> rel_tol;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string note;

  std::optional<bool> pass() const;
};

class OutputSet {
public:
  OutputSet(const RunConfig& cfg, std::string command);

  void table(const std::string& name, const Table& t, const nlohmann::json& meta = nlohmann::json::object());
  void json(const std::string& name, const nlohmann::json& body);
  void raw(const std::string& file_name, const std::string& content) { write_file(file_name, content); }
  void check(Check c) { checks_.push_back(std::move(c)); }
  void info(const std::string& key, nlohmann::json value) { info_[key] = std::move(value); }

  const std::vector<Check>& checks() const { return checks_; }
  bool all_pass() const;
  // Writes manifest.json; returns its path.
  std::string finish();
  const std::string& dir() const { return dir_; }

private:
  void write_file(const std::string& name, const std::string& content);

  std::string dir_;
  std::string format_;
  std::string hash_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<Check> checks_;
  nlohmann::json info_ = nlohmann::json::object();
};

} // namespace sqz::cli
