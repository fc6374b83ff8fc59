#include "kgs/core/oracle_fd.hpp"

#include <algorithm>
#include <cmath>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {

const cplx I{0.0, 1.0};

// Constant-coefficient tridiagonal solve: sub * x[i-1] + diag * x[i] + sup * x[i+1] = rhs[i].
class Thomas {
 public:
  Thomas(std::size_t n, cplx sub, cplx diag, cplx sup) : sub_(sub), c_(n), inv_(n) {
    cplx denom = diag;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) denom = diag - sub * c_[i - 1];
      if (std::abs(denom) < 1e-300) fail(ErrorKind::Numeric, "singular tridiagonal system in FD oracle");
      inv_[i] = 1.0 / denom;
      c_[i] = sup * inv_[i];
    }
  }

  void solve(CVec& x) const {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) x[i] = ((i > 0 ? x[i] - sub_ * x[i - 1] : x[i])) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_[i] * x[i + 1];
  }

 private:
  cplx sub_;
  CVec c_, inv_;
};

struct Mesh {
  std::size_t K;  // nodes 0..K, x_K = L
  double h;
  std::size_t rx;
};

Mesh make_mesh(const SpatialGrid& grid, const FDConfig& cfg) {
  const std::size_t K = (grid.size() / 2) * cfg.refine_x;
  return {K, grid.half_width() / static_cast<double>(K), cfg.refine_x};
}

// Four-point Lagrange interpolation of half-line samples onto the FD mesh.
CVec to_mesh(const HalfLineFunction& f, const Mesh& mesh) {
  CVec out(mesh.K + 1);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i <= mesh.K; ++i) {
    if (i % mesh.rx == 0) {
      out[i] = f.samples[i / mesh.rx];
      continue;
    }
    const double s = static_cast<double>(i) / static_cast<double>(mesh.rx);
    std::size_t base = static_cast<std::size_t>(std::floor(s));
    base = std::clamp<std::size_t>(base, 1, n - 3) - 1;
    cplx acc{};
    for (std::size_t a = 0; a < 4; ++a) {
      double w = 1.0;
      for (std::size_t b = 0; b < 4; ++b)
        if (b != a) w *= (s - static_cast<double>(base + b)) / static_cast<double>(static_cast<long>(a) - static_cast<long>(b));
      acc += w * f.samples[base + a];
    }
    out[i] = acc;
  }
  return out;
}

// Crank-Nicolson step of u_t = i u_xx on interior nodes over `tau`.
class SchrodingerStepper {
 public:
  SchrodingerStepper(const Mesh& mesh, double tau)
      : mesh_(mesh), r_(I * tau / (2.0 * mesh.h * mesh.h)), lhs_(mesh.K - 1, -r_, 1.0 + 2.0 * r_, -r_) {}

  void step(CVec& u, cplx g_old, cplx g_new) const {
    const std::size_t K = mesh_.K;
    CVec rhs(K - 1);
    for (std::size_t i = 1; i < K; ++i) rhs[i - 1] = u[i] + r_ * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    rhs[0] += r_ * g_new;
    lhs_.solve(rhs);
    u[0] = g_new;
    std::copy(rhs.begin(), rhs.end(), u.begin() + 1);
    u[K] = 0.0;
    (void)g_old;
  }

 private:
  Mesh mesh_;
  cplx r_;
  Thomas lhs_;
};

// Crank-Nicolson step of n' = v, v' = (D2 - 1) n + boundary, in the
// eliminated form (I - tau^2/4 A) n^{k+1} = n^k + tau v^k + tau^2/4 (A n^k + b^k + b^{k+1}).
class KgStepper {
 public:
  KgStepper(const Mesh& mesh, double tau)
      : mesh_(mesh), tau_(tau), q_(tau * tau / (4.0 * mesh.h * mesh.h)),
        lhs_(mesh.K - 1, -q_, 1.0 + 2.0 * q_ + tau * tau / 4.0, -q_) {}

  void step(CVec& n, CVec& v, cplx h_old, cplx h_new) const {
    const std::size_t K = mesh_.K;
    const double inv_h2 = 1.0 / (mesh_.h * mesh_.h);
    n[0] = h_old;
    n[K] = 0.0;
    CVec An(K + 1, cplx{});
    for (std::size_t i = 1; i < K; ++i) An[i] = (n[i - 1] - 2.0 * n[i] + n[i + 1]) * inv_h2 - n[i];
    CVec rhs(K - 1);
    for (std::size_t i = 1; i < K; ++i) rhs[i - 1] = n[i] + tau_ * v[i] + 0.25 * tau_ * tau_ * An[i];
    // A n^k above already carries h_old through n[0]; add b^{k+1}.
    rhs[0] += 0.25 * tau_ * tau_ * h_new * inv_h2;
    lhs_.solve(rhs);
    CVec next(K + 1);
    next[0] = h_new;
    std::copy(rhs.begin(), rhs.end(), next.begin() + 1);
    next[K] = 0.0;
    // v^{k+1} = 2 (n^{k+1} - n^k)/tau - v^k on the interior; boundary rates by differencing.
    for (std::size_t i = 1; i < K; ++i) v[i] = 2.0 * (next[i] - n[i]) / tau_ - v[i];
    v[0] = (h_new - h_old) / tau_;
    v[K] = 0.0;
    n = std::move(next);
  }

 private:
  Mesh mesh_;
  double tau_, q_;
  Thomas lhs_;
};

double mesh_mass(const CVec& f, double h, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < f.size(); ++i) {
    const double w = (i == from || i + 1 == f.size()) ? 0.5 : 1.0;
    s += w * std::norm(f[i]);
  }
  return std::sqrt(h * s);
}

void store(SpaceTimeField& out, std::size_t m, const CVec& f, const Mesh& mesh) {
  const std::size_t z = out.grid().zero_index();
  for (std::size_t j = z; j < out.cols(); ++j) out(m, j) = f[(j - z) * mesh.rx];
}

void guard(const CVec& f, double limit) {
  for (const auto& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > limit)
      fail(ErrorKind::Numeric, "FD oracle became unstable");
}

struct Monitor {
  double band_start;
  double worst = 0.0;
  void observe(const CVec& f, const Mesh& mesh) {
    const double total = mesh_mass(f, mesh.h, 0);
    if (total <= 0.0) return;
    const auto from = static_cast<std::size_t>(std::floor((1.0 - band_start) * static_cast<double>(mesh.K)));
    worst = std::max(worst, mesh_mass(f, mesh.h, from) / total);
  }
};

double data_scale(const CVec& a, const TimeSeries& b) {
  double m = b.size() ? b.max_abs() : 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void FDConfig::validate() const {
  if (refine_x == 0 || refine_t == 0) fail(ErrorKind::Config, "FD refinement factors must be positive");
  if (!(reflection_band > 0.0 && reflection_band < 1.0)) fail(ErrorKind::Config, "reflection band must lie in (0, 1)");
}

FDResult fd_schrodinger_ibvp(const HalfLineFunction& u0, const TimeSeries& g, const TimeGrid& times,
                             const FDConfig& cfg) {
  cfg.validate();
  const Mesh mesh = make_mesh(u0.grid, cfg);
  const double tau = times.dt / static_cast<double>(cfg.refine_t);
  SchrodingerStepper stepper(mesh, tau);
  FDResult out;
  out.u = SpaceTimeField(u0.grid, times);
  CVec u = to_mesh(u0, mesh);
  u[0] = g.size() ? g.value_at(0.0) : cplx{};
  u[mesh.K] = 0.0;
  const double limit = 1e6 * std::max(1.0, data_scale(u, g));
  Monitor mon{cfg.reflection_band};
  store(out.u, 0, u, mesh);
  for (std::size_t m = 1; m < times.count; ++m) {
    for (std::size_t s = 0; s < cfg.refine_t; ++s) {
      const double t0 = times.t(m - 1) + static_cast<double>(s) * tau;
      stepper.step(u, g.size() ? g.value_at(t0) : cplx{}, g.size() ? g.value_at(t0 + tau) : cplx{});
    }
    guard(u, limit);
    mon.observe(u, mesh);
    store(out.u, m, u, mesh);
  }
  out.reflection = mon.worst;
  return out;
}

FDResult fd_kg_ibvp(const HalfLineFunction& n0, const HalfLineFunction& n1, const TimeSeries& h,
                    const TimeGrid& times, const FDConfig& cfg) {
  cfg.validate();
  const Mesh mesh = make_mesh(n0.grid, cfg);
  const double tau = times.dt / static_cast<double>(cfg.refine_t);
  KgStepper stepper(mesh, tau);
  FDResult out;
  out.n = SpaceTimeField(n0.grid, times);
  out.nt = SpaceTimeField(n0.grid, times);
  CVec n = to_mesh(n0, mesh), v = to_mesh(n1, mesh);
  auto hv = [&](double t) { return h.size() ? h.value_at(t) : cplx{}; };
  n[0] = hv(0.0);
  const double limit = 1e6 * std::max(1.0, data_scale(n, h) + data_scale(v, TimeSeries()));
  Monitor mon{cfg.reflection_band};
  store(out.n, 0, n, mesh);
  store(out.nt, 0, v, mesh);
  for (std::size_t m = 1; m < times.count; ++m) {
    for (std::size_t s = 0; s < cfg.refine_t; ++s) {
      const double t0 = times.t(m - 1) + static_cast<double>(s) * tau;
      stepper.step(n, v, hv(t0), hv(t0 + tau));
    }
    guard(n, limit);
    mon.observe(n, mesh);
    store(out.n, m, n, mesh);
    store(out.nt, m, v, mesh);
  }
  out.reflection = mon.worst;
  return out;
}

FDResult fd_kgs_coupled(const HalfLineFunction& u0, const HalfLineFunction& n0, const HalfLineFunction& n1,
                        const TimeSeries& g, const TimeSeries& h, const TimeGrid& times, const FDConfig& cfg) {
  cfg.validate();
  const Mesh mesh = make_mesh(u0.grid, cfg);
  const double tau = times.dt / static_cast<double>(cfg.refine_t);
  SchrodingerStepper half_s(mesh, 0.5 * tau);
  KgStepper half_w(mesh, 0.5 * tau);
  FDResult out;
  out.u = SpaceTimeField(u0.grid, times);
  out.n = SpaceTimeField(u0.grid, times);
  out.nt = SpaceTimeField(u0.grid, times);
  auto gv = [&](double t) { return g.size() ? g.value_at(t) : cplx{}; };
  auto hv = [&](double t) { return h.size() ? h.value_at(t) : cplx{}; };
  CVec u = to_mesh(u0, mesh), n = to_mesh(n0, mesh), v = to_mesh(n1, mesh);
  u[0] = gv(0.0);
  u[mesh.K] = 0.0;
  n[0] = hv(0.0);
  const double limit = 1e6 * std::max(1.0, data_scale(u, g) + data_scale(n, h) + data_scale(v, TimeSeries()));
  Monitor mon{cfg.reflection_band};
  store(out.u, 0, u, mesh);
  store(out.n, 0, n, mesh);
  store(out.nt, 0, v, mesh);
  for (std::size_t m = 1; m < times.count; ++m) {
    for (std::size_t s = 0; s < cfg.refine_t; ++s) {
      const double t0 = times.t(m - 1) + static_cast<double>(s) * tau, th = t0 + 0.5 * tau, t1 = t0 + tau;
      half_s.step(u, gv(t0), gv(th));
      half_w.step(n, v, hv(t0), hv(th));
      for (std::size_t i = 1; i < mesh.K; ++i) {
        const double nr = n[i].real();
        v[i] += tau * std::norm(u[i]);
        u[i] *= std::exp(I * cfg.kappa * nr * tau);
      }
      half_s.step(u, gv(th), gv(t1));
      half_w.step(n, v, hv(th), hv(t1));
    }
    guard(u, limit);
    guard(n, limit);
    mon.observe(u, mesh);
    store(out.u, m, u, mesh);
    store(out.n, m, n, mesh);
    store(out.nt, m, v, mesh);
  }
  out.reflection = mon.worst;
  return out;
}

}  // namespace kgs
