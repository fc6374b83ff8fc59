#include "kgs/core/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {

// Non-finite values become null so the file stays valid JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void put(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

Report::Report(const std::string& experiment, const json& resolved_config) {
  root_["experiment"] = experiment;
  root_["config"] = resolved_config;
  root_["checks"] = json::array();
  root_["warnings"] = json::array();
  root_["metrics"] = json::object();
  root_["pass"] = true;
}

bool Report::check(const std::string& name, double value, double threshold, bool at_least) {
  const bool ok = std::isfinite(value) && (at_least ? value >= threshold : value <= threshold);
  root_["checks"].push_back(json{{"name", name},
                                 {"value", number(value)},
                                 {"threshold", number(threshold)},
                                 {"relation", at_least ? ">=" : "<="},
                                 {"pass", ok}});
  if (!ok) root_["pass"] = false;
  return ok;
}

bool Report::check_flag(const std::string& name, bool ok, const std::string& detail) {
  json c{{"name", name}, {"pass", ok}};
  if (!detail.empty()) c["detail"] = detail;
  root_["checks"].push_back(c);
  if (!ok) root_["pass"] = false;
  return ok;
}

void Report::warn(const std::string& message) {
  // Repeats that differ only in a parenthesized figure are dropped.
  const std::string key = message.substr(0, message.find(" ("));
  for (const auto& w : root_["warnings"])
    if (w.get<std::string>().substr(0, w.get<std::string>().find(" (")) == key) return;
  root_["warnings"].push_back(message);
}

void Report::warn_all(const std::vector<std::string>& messages) {
  for (const auto& m : messages) warn(m);
}

void Report::fail_with(const std::string& invariant, const std::string& message) {
  root_["failure"] = json{{"invariant", invariant}, {"message", message}};
  root_["pass"] = false;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot rename '" + tmp + "': " + ec.message());
}

std::string series_csv(const std::vector<double>& t, const CVec& values) {
  std::ostringstream os;
  os << "t,re,im\n";
  for (std::size_t m = 0; m < values.size() && m < t.size(); ++m) {
    put(os, t[m]);
    os << ',';
    put(os, values[m].real());
    os << ',';
    put(os, values[m].imag());
    os << '\n';
  }
  return os.str();
}

std::string columns_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      put(os, r < columns[c].size() ? columns[c][r] : NAN);
    }
    os << '\n';
  }
  return os.str();
}

std::string spacetime_csv(const SpaceTimeField& f, std::size_t stride) {
  std::ostringstream os;
  os << "x,t,re,im\n";
  const auto& grid = f.grid();
  for (std::size_t m = 0; m < f.rows(); m += stride)
    for (std::size_t j = grid.zero_index(); j < grid.size(); j += stride) {
      put(os, grid.x(j));
      os << ',';
      put(os, f.times().t(m));
      os << ',';
      put(os, f(m, j).real());
      os << ',';
      put(os, f(m, j).imag());
      os << '\n';
    }
  return os.str();
}

std::string snapshot_csv(const Field& f) {
  std::ostringstream os;
  os << "x,re,im\n";
  for (std::size_t j = f.grid.zero_index(); j < f.size(); ++j) {
    put(os, f.grid.x(j));
    os << ',';
    put(os, f[j].real());
    os << ',';
    put(os, f[j].imag());
    os << '\n';
  }
  return os.str();
}

}  // namespace kgs
