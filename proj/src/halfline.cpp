#include "kgs/core/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/error.hpp"

namespace kgs {

const char* to_string(ExtensionPolicy p) { return p == ExtensionPolicy::Odd ? "odd" : "zero"; }

ExtensionPolicy parse_extension_policy(const std::string& name) {
  if (name == "odd") return ExtensionPolicy::Odd;
  if (name == "zero") return ExtensionPolicy::Zero;
  fail(ErrorKind::Config, "unknown extension policy '" + name + "' (expected odd|zero)");
}

cplx TimeSeries::value_at(double t) const {
  if (values.empty()) return {};
  const double pos = (t - t0) / dt;
  if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) {
    // Tolerate round-off at the right end.
    if (std::abs(pos - static_cast<double>(values.size() - 1)) < 1e-9) return values.back();
    return {};
  }
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double TimeSeries::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

OddExtensionResult odd_extension_checked(const HalfLineFunction& f) {
  const auto& grid = f.grid;
  const std::size_t N = grid.size(), half = N / 2;
  OddExtensionResult out{Field(grid), std::abs(f.samples.front())};
  for (std::size_t i = 1; i < half; ++i) {
    out.field[half + i] = f.samples[i];
    out.field[half - i] = -f.samples[i];
  }
  return out;
}

Field odd_extension(const HalfLineFunction& f) { return odd_extension_checked(f).field; }

Field zero_extension(const HalfLineFunction& f) {
  Field out(f.grid);
  const std::size_t half = f.grid.size() / 2;
  for (std::size_t i = 0; i < half; ++i) out[half + i] = f.samples[i];
  return out;
}

Field extend(const HalfLineFunction& f, ExtensionPolicy policy) {
  return policy == ExtensionPolicy::Odd ? odd_extension(f) : zero_extension(f);
}

HalfLineFunction restrict_to_halfline(const Field& F, double s) {
  HalfLineFunction f(F.grid, s);
  const std::size_t half = F.grid.size() / 2;
  for (std::size_t i = 0; i < half; ++i) f.samples[i] = F[half + i];
  f.samples[half] = F[0];
  return f;
}

TimeSeries chi_cutoff(const TimeSeries& g) {
  TimeSeries out = g;
  for (std::size_t m = 0; m < out.size(); ++m)
    if (out.t(m) < 0.0) out.values[m] = {};
  return out;
}

double halfline_norm(const HalfLineFunction& f, double s, ExtensionPolicy policy) {
  return sobolev_norm(extend(f, policy), s);
}

double halfline_l2(const HalfLineFunction& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    acc += w * std::norm(f.samples[i]);
  }
  return std::sqrt(acc * f.grid.dx());
}

CompatibilityResult compatibility_check(const HalfLineFunction& u0, const TimeSeries& g, double s,
                                        double tol) {
  CompatibilityResult r;
  const cplx g0 = g.values.empty() ? cplx{} : g.value_at(0.0);
  r.mismatch = std::abs(u0.at_origin() - g0);
  if (s > 0.5 && r.mismatch > tol) {
    r.status = CompatibilityStatus::Warn;
    std::ostringstream os;
    os << "compatibility u0(0) = g(0) violated by " << r.mismatch << " at s = " << s;
    r.message = os.str();
  }
  return r;
}

double time_sobolev_norm(const TimeSeries& g, double s) {
  if (g.values.empty()) return 0.0;
  std::size_t P = 8;
  while (P < 4 * g.size()) P *= 2;
  CVec buf(P, cplx{});
  for (std::size_t m = 0; m < g.size(); ++m)
    if (g.t(m) >= 0.0) buf[m] = g.values[m];
  fft_2d(1, P, buf);
  const double period = static_cast<double>(P) * g.dt;
  double acc = 0.0;
  for (std::size_t k = 0; k < P; ++k) {
    const double kk = k < P / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(P);
    const double tau = 2.0 * std::numbers::pi * kk / period;
    acc += std::pow(1.0 + tau * tau, s) * std::norm(buf[k] * g.dt);
  }
  return std::sqrt(acc / period);
}

TimeSeries extend_with_taper(const TimeSeries& g, double taper_length) {
  if (g.values.empty() || taper_length <= 0.0) return g;
  const std::size_t n = g.size();
  const cplx end = g.values.back();
  cplx slope{};
  if (n >= 3)
    slope = (3.0 * g.values[n - 1] - 4.0 * g.values[n - 2] + g.values[n - 3]) / (2.0 * g.dt);
  else if (n == 2)
    slope = (g.values[1] - g.values[0]) / g.dt;
  const auto extra = static_cast<std::size_t>(std::ceil(taper_length / g.dt));
  TimeSeries out = g;
  out.values.reserve(n + extra);
  for (std::size_t m = 1; m <= extra; ++m) {
    const double s = static_cast<double>(m) * g.dt;
    out.values.push_back((end + slope * s) * (1.0 - smooth_step(s / taper_length)));
  }
  return out;
}

namespace {

struct CsvRow {
  double coord;
  cplx value;
};

std::vector<CsvRow> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open CSV file '" + path + "'");
  std::vector<CsvRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> cols;
    double v;
    while (ls >> v) cols.push_back(v);
    if (cols.empty()) {
      if (rows.empty()) continue;  // header line
      fail(ErrorKind::Io, "malformed CSV row in '" + path + "': " + line);
    }
    if (cols.size() == 2) rows.push_back({cols[0], cplx(cols[1], 0.0)});
    else if (cols.size() == 3) rows.push_back({cols[0], cplx(cols[1], cols[2])});
    else fail(ErrorKind::Io, "CSV rows need 2 or 3 columns in '" + path + "'");
  }
  if (rows.empty()) fail(ErrorKind::Io, "CSV file '" + path + "' has no data rows");
  return rows;
}

}  // namespace

HalfLineFunction load_halfline_csv(const std::string& path, const SpatialGrid& grid, double s) {
  auto rows = read_csv_rows(path);
  std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) { return a.coord < b.coord; });
  HalfLineFunction f(grid, s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    if (x < rows.front().coord || x > rows.back().coord) continue;
    auto hi = std::lower_bound(rows.begin(), rows.end(), x,
                               [](const CsvRow& r, double v) { return r.coord < v; });
    if (hi == rows.begin()) { f.samples[i] = hi->value; continue; }
    auto lo = hi - 1;
    if (hi == rows.end()) { f.samples[i] = lo->value; continue; }
    const double w = (x - lo->coord) / (hi->coord - lo->coord);
    f.samples[i] = (1.0 - w) * lo->value + w * hi->value;
  }
  return f;
}

TimeSeries load_series_csv(const std::string& path) {
  const auto rows = read_csv_rows(path);
  if (rows.size() < 2) fail(ErrorKind::Io, "time series '" + path + "' needs at least two rows");
  const double dt = rows[1].coord - rows[0].coord;
  if (!(dt > 0.0)) fail(ErrorKind::Io, "time series '" + path + "' must be increasing");
  TimeSeries g(rows[0].coord, dt, {});
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (std::abs(rows[m].coord - g.t(m)) > 1e-6 * dt)
      fail(ErrorKind::Io, "time series '" + path + "' is not uniformly spaced");
    g.values.push_back(rows[m].value);
  }
  return g;
}

}  // namespace kgs
