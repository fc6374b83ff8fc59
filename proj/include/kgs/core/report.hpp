#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgs/core/halfline.hpp"
#include "kgs/core/spacetime.hpp"

namespace kgs {

using json = nlohmann::json;

/// Report under construction. Keys are kept sorted by nlohmann::json, so a
/// fixed run produces identical bytes.
class Report {
 public:
  Report(const std::string& experiment, const json& resolved_config);

  /// Records value <= threshold (or >= when `at_least`).
  bool check(const std::string& name, double value, double threshold, bool at_least = false);
  /// Records a boolean invariant.
  bool check_flag(const std::string& name, bool ok, const std::string& detail = "");
  void warn(const std::string& message);
  void warn_all(const std::vector<std::string>& messages);
  /// Marks the run failed with the invariant that broke.
  void fail_with(const std::string& invariant, const std::string& message);

  json& metrics() { return root_["metrics"]; }
  bool passed() const { return root_["pass"].get<bool>(); }
  const json& root() const { return root_; }
  std::string dump() const { return root_.dump(2) + "\n"; }

 private:
  json root_;
};

/// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// "t,re,im" rows.
std::string series_csv(const std::vector<double>& t, const CVec& values);
/// Named real columns sharing the first column.
std::string columns_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);
/// "x,t,re,im" rows for x >= 0, every `stride`-th node and time.
std::string spacetime_csv(const SpaceTimeField& f, std::size_t stride);
/// "x,re,im" rows for x >= 0.
std::string snapshot_csv(const Field& f);

}  // namespace kgs
