#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

int run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + g_cli + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path p = g_work / name;
  std::ofstream(p) << content;
  return p;
}

const char* kSmallRun = R"({"grid": {"L": 10.0, "N": 64}, "time": {"T": 0.2, "dt": 0.01}})";

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(run("--version") == 0);
  CHECK(run("defaults local-solve") == 0);
  CHECK(run("defaults no-such-thing") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("bad configurations exit 2 without artifacts") {
  fs::path malformed = write_file("malformed.json", "{\"grid\": ");
  fs::path unknown = write_file("unknown.json", R"({"grid": {"points": 64}})");
  fs::path typed = write_file("typed.json", R"({"time": {"dt": "small"}})");
  for (const auto& cfg : {malformed, unknown, typed}) {
    fs::path out = g_work / ("out_" + cfg.stem().string());
    CHECK(run("local-solve -c '" + cfg.string() + "' -o '" + out.string() + "'") == 2);
    CHECK_FALSE(fs::exists(out));
  }
  CHECK(run("local-solve -c '" + (g_work / "absent.json").string() + "' -o '" + (g_work / "x").string() + "'") == 2);
  CHECK(run("local-solve") == 2);  // --config is required
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  // The output directory is part of the recorded config, so every run uses the same one.
  fs::path cfg = write_file("small.json", kSmallRun);
  fs::path a = g_work / "run_a";
  const std::string args = "linear-kg-check -q -c '" + cfg.string() + "' -o '" + a.string() + "'";
  CHECK(run(args) == 0);
  const std::string first = slurp(a / "report.json");
  const std::string field = slurp(a / "kg_field.csv");
  CHECK_FALSE(first.empty());
  CHECK_FALSE(field.empty());
  CHECK(run(args) == 0);
  CHECK(slurp(a / "report.json") == first);
  CHECK(run(args, "KGS_THREADS=3") == 0);
  CHECK(slurp(a / "report.json") == first);
  CHECK(slurp(a / "kg_field.csv") == field);
}

TEST_CASE("a failing check exits 1 and still writes the report") {
  // A Picard cap of one iteration cannot satisfy the iteration criterion.
  fs::path cfg = write_file("strict.json", R"({"grid": {"L": 10.0, "N": 64}, "time": {"T": 0.1, "dt": 0.01},
    "options": {"oracle": false}, "solver": {"max_iter": 1}})");
  fs::path out = g_work / "strict";
  CHECK(run("local-solve -c '" + cfg.string() + "' -o '" + out.string() + "'") == 1);
  CHECK(fs::exists(out / "report.json"));
  CHECK(slurp(out / "report.json").find("\"pass\": false") != std::string::npos);
}

TEST_CASE("report collects earlier runs") {
  fs::path out = g_work / "summary";
  fs::path cfg = write_file("collect.json", R"({"options": {"report_inputs": [")" +
                                                 (g_work / "run_a" / "report.json").string() + R"("]}})");
  CHECK(run("report -c '" + cfg.string() + "' -o '" + out.string() + "'") == 0);
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(fs::exists(out / "report.json"));
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <kgs executable> <work dir> [doctest options]\n");
    return 2;
  }
  g_cli = argv[1];
  g_work = argv[2];
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 2, argv + 2);
  return ctx.run();
}
