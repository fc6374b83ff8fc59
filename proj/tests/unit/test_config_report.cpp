#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kgs/core/config.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/report.hpp"

using namespace kgs;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("kgs_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("every experiment has defaults that resolve") {
  CHECK(experiment_names().size() == 8);
  for (const auto& name : experiment_names()) {
    json d = default_config(name);
    CHECK(d.contains("grid"));
    RunConfig c = resolve_config(name, json::object());
    CHECK(c.experiment == name);
    json resolved = c.resolved;
    CHECK(resolved["experiment"] == name);
    resolved.erase("experiment");
    CHECK(resolved == d);
  }
}

TEST_CASE("defaults mirror the acceptance tolerances") {
  RunConfig c = resolve_config("local-solve", json::object());
  CHECK(c.tol.residual_ratio == 0.5);
  CHECK(c.tol.max_iterations == 20);
  CHECK(c.tol.oracle_rel == 5e-2);
  CHECK(c.N == 256);
  CHECK(c.u0.type == "gaussian");
}

TEST_CASE("overrides merge into the defaults") {
  RunConfig c = resolve_config("global-solve", json{{"grid", {{"L", 30.0}}}, {"time", {{"T_final", 0.5}}}});
  CHECK(c.L == 30.0);
  CHECK(c.N == 256);
  CHECK(c.T_final == 0.5);
}

TEST_CASE("data specs are replaced as a whole") {
  RunConfig c = resolve_config("local-solve", json{{"data", {{"u0", {{"type", "bump"}}}}}});
  CHECK(c.u0.type == "bump");
  CHECK(c.u0.amp == 1.0);
  CHECK(c.u0.center == 0.0);
  CHECK(c.n0.type == "dgaussian");
}

TEST_CASE("invalid configurations are config errors") {
  CHECK(kind_of([] { resolve_config("local-solve", json{{"grid", {{"M", 3}}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("local-solve", json{{"bogus", 1}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("local-solve", json{{"grid", {{"N", "many"}}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("local-solve", json{{"grid", {{"N", 255}}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("local-solve", json{{"time", {{"T", 2.0}}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("local-solve", json{{"data", {{"u0", {{"type", "sawtooth"}}}}}}); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("no-such-experiment", json::object()); }) == ErrorKind::Config);
  CHECK(kind_of([] {
          resolve_config("global-solve", json{{"data", {{"g", {{"type", "power_exp"}, {"power", 1.0}}}}}});
        }) == ErrorKind::Config);
  CHECK(kind_of([] { resolve_config("estimates-lab", json{{"ensemble", {{"count", 5}}}}); }) == ErrorKind::Config);
}

TEST_CASE("config files accept comments and check the experiment name") {
  fs::path dir = scratch_dir("config");
  {
    std::ofstream(dir / "ok.json") << "// override\n{ \"experiment\": \"local-solve\", \"seed\": 7 }\n";
    std::ofstream(dir / "wrong.json") << "{ \"experiment\": \"global-solve\" }\n";
    std::ofstream(dir / "broken.json") << "{ \"seed\": ";
  }
  CHECK(load_config("local-solve", (dir / "ok.json").string()).seed == 7);
  CHECK(kind_of([&] { load_config("local-solve", (dir / "wrong.json").string()); }) == ErrorKind::Config);
  CHECK(kind_of([&] { load_config("local-solve", (dir / "broken.json").string()); }) == ErrorKind::Config);
  CHECK(kind_of([&] { load_config("local-solve", (dir / "missing.json").string()); }) == ErrorKind::Config);
  fs::remove_all(dir);
}

TEST_CASE("preset data builders") {
  SpatialGrid grid(8.0, 128);  // dx = 1/8
  FunctionSpec g;
  g.type = "gaussian";
  g.amp = 2.0;
  g.center = 3.0;
  auto f = make_halfline(g, grid, 0.0);
  CHECK(std::abs(f.samples[24]) == doctest::Approx(2.0));

  FunctionSpec r;
  r.type = "rough";
  r.amp = 0.5;
  r.lo = 2.0;
  r.hi = 6.0;
  auto rough = make_halfline(r, grid, 0.0);
  CHECK(halfline_l2(rough) == doctest::Approx(0.5).epsilon(2e-2));
  CHECK(rough.samples[0] == cplx{});
  auto rough2 = make_halfline(r, grid, 0.0);
  CHECK(rough.samples == rough2.samples);

  FunctionSpec p;
  p.type = "power_exp";
  p.power = 2.0;
  auto s = make_series(p, TimeGrid{0.1, 11});
  CHECK(s.values[10].real() == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("report checks") {
  Report r("local-solve", json{{"seed", 1}});
  CHECK(r.passed());
  CHECK(r.check("a", 0.1, 0.5));
  CHECK(r.check("b", 4.0, 3.0, true));
  CHECK(r.passed());
  CHECK_FALSE(r.check("c", std::nan(""), 1.0));
  CHECK_FALSE(r.passed());
  CHECK(r.root()["checks"][2]["value"].is_null());

  r.warn("ratio too large (0.3)");
  r.warn("ratio too large (0.4)");
  r.warn("another");
  CHECK(r.root()["warnings"].size() == 2);

  Report f("x", json::object());
  f.fail_with("convergence", "diverged");
  CHECK_FALSE(f.passed());
  CHECK(f.dump().back() == '\n');
}

TEST_CASE("atomic writes leave no temporary file") {
  fs::path dir = scratch_dir("report");
  std::string path = (dir / "report.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK_THROWS_AS(write_atomic((dir / "missing" / "x.json").string(), "y"), Error);
  fs::remove_all(dir);
}

TEST_CASE("CSV formatting") {
  CHECK(series_csv({0.0, 0.5}, {cplx(1.0, 2.0), cplx(0.25, 0.0)}) == "t,re,im\n0,1,2\n0.5,0.25,0\n");
  CHECK(columns_csv({"t", "m"}, {{0.0, 1.0}, {2.0, 3.0}}) == "t,m\n0,2\n1,3\n");
}
